//! Monte Carlo SLE_κ(ρ₋;ρ₊): the driving SDE, the Loewner flow at the point
//! 1, and estimates of `E[ψ'(1)^λ]`.
//!
//! The process starts from `(0, -ε, ε)` rather than the degenerate triple;
//! `ε` defaults to `√dt · 10⁻³`.

mod driving;
mod estimate;
mod flow;

pub use driving::{sample_driving, sample_driving_stream, DrivingProcess};
pub use estimate::{
    estimate_moment, sample_psi_prime, sample_psi_prime_refined, sample_psi_prime_start_study,
    simulate_psi_prime, simulate_psi_prime_pair, simulate_psi_prime_start_pair, MomentEstimate,
    PairedSample, PathOutcome, PsiSample, TailFit, MIN_ACCEPTANCE,
};
pub use flow::{psi_prime, track_point, PsiPrime, TrackedPoint};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discretization and stopping parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    /// Capacity horizon `T`.
    pub t_max: f64,
    /// Step in the intrinsic clock; a substep covers capacity time
    /// `≈ dt·x²y²/(κ(x²+y²))` for gaps `x = V⁺-W`, `y = W-V⁻`.
    pub dt: f64,
    /// Initial force-point offset; `None` means `√dt · 10⁻³`.
    pub start_eps: Option<f64>,
    /// Accept a path when the ratio moved less than this over `[T/10, T]`.
    pub tail_tol: f64,
    /// `g_t(1) - V⁺_t` below this at a force-point collision means 1 is swallowed.
    pub swallow_eps: f64,
    /// Per-path step budget.
    pub max_steps: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            t_max: 1e5,
            dt: 0.05,
            start_eps: None,
            tail_tol: 1e-3,
            swallow_eps: 1e-6,
            max_steps: 5_000_000,
        }
    }
}

impl SimConfig {
    pub fn start_eps(&self) -> f64 {
        self.start_eps.unwrap_or(self.dt.sqrt() * 1e-3)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.t_max > 0.0
            && self.t_max.is_finite()
            && self.dt > 0.0
            && self.dt <= 1.0
            && self.start_eps() > 0.0
            && self.start_eps() < 0.1
            && self.tail_tol > 0.0
            && self.swallow_eps > 0.0
            && self.max_steps > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid simulation config {self:?}")))
        }
    }
}
