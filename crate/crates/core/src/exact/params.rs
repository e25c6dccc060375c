//! The (κ, ρ±) ↔ (γ, β±, W±) dictionary, boundary cosmological constants and
//! the roots of the moment equation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// SLE_κ(ρ₋; ρ₊) parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SleParams {
    pub kappa: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
}

impl SleParams {
    pub fn new(kappa: f64, rho_minus: f64, rho_plus: f64) -> Result<Self> {
        let p = SleParams {
            kappa,
            rho_minus,
            rho_plus,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let &SleParams {
            kappa,
            rho_minus,
            rho_plus,
        } = self;
        if !(kappa > 0.0 && kappa.is_finite()) {
            return domain(format!("kappa = {kappa} must be positive"));
        }
        if !(rho_minus > -2.0) {
            return domain(format!("rho_minus = {rho_minus} must exceed -2"));
        }
        let lo = (-2.0f64).max(0.5 * kappa - 4.0);
        if !(rho_plus > lo) {
            return domain(format!("rho_plus = {rho_plus} must exceed {lo}"));
        }
        Ok(())
    }

    /// `Q_κ = √κ/2 + 2/√κ`.
    pub fn q_kappa(&self) -> f64 {
        let s = self.kappa.sqrt();
        0.5 * s + 2.0 / s
    }

    /// Moments of ψ′(1) blow up at `λ₀ = (ρ₊+2)(ρ₊+4−κ/2)/κ`.
    pub fn lambda0(&self) -> f64 {
        lambda0(self)
    }

    /// Whether the curve stays off `(0, ∞)` so that ψ′(1) is the
    /// derivative of the normalized mapping-out function.
    pub fn non_touching(&self) -> bool {
        self.rho_plus >= 0.5 * self.kappa - 2.0
    }
}

pub fn lambda0(p: &SleParams) -> f64 {
    (p.rho_plus + 2.0) * (p.rho_plus + 4.0 - 0.5 * p.kappa) / p.kappa
}

/// Liouville parameters for `γ ∈ (0, 2)`; `Q = γ/2 + 2/γ` and
/// `W = γ(Q + γ/2 − β)` on each side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LqgParams {
    pub gamma: f64,
    pub q: f64,
    pub beta_minus: f64,
    pub beta_plus: f64,
    pub w_minus: f64,
    pub w_plus: f64,
}

pub fn background_charge(gamma: f64) -> f64 {
    0.5 * gamma + 2.0 / gamma
}

pub fn weight_from_beta(gamma: f64, beta: f64) -> f64 {
    gamma * (background_charge(gamma) + 0.5 * gamma - beta)
}

pub fn beta_from_weight(gamma: f64, w: f64) -> f64 {
    background_charge(gamma) + 0.5 * gamma - w / gamma
}

impl LqgParams {
    pub fn new(gamma: f64, beta_minus: f64, beta_plus: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 2.0) {
            return domain(format!("gamma = {gamma} must lie in (0, 2)"));
        }
        Ok(LqgParams {
            gamma,
            q: background_charge(gamma),
            beta_minus,
            beta_plus,
            w_minus: weight_from_beta(gamma, beta_minus),
            w_plus: weight_from_beta(gamma, beta_plus),
        })
    }

    pub fn from_weights(gamma: f64, w_minus: f64, w_plus: f64) -> Result<Self> {
        Self::new(
            gamma,
            beta_from_weight(gamma, w_minus),
            beta_from_weight(gamma, w_plus),
        )
    }

    /// `κ = γ²`, `ρ± = γ² − γβ±`.
    pub fn to_sle(&self) -> SleParams {
        let g2 = self.gamma * self.gamma;
        SleParams {
            kappa: g2,
            rho_minus: g2 - self.gamma * self.beta_minus,
            rho_plus: g2 - self.gamma * self.beta_plus,
        }
    }

    /// Inverse of [`to_sle`](Self::to_sle); needs `κ < 4` (apply
    /// [`duality_map`] first otherwise).
    pub fn from_sle(p: &SleParams) -> Result<Self> {
        if !(p.kappa > 0.0 && p.kappa < 4.0) {
            return domain(format!(
                "kappa = {} has no gamma in (0, 2); map to 16/kappa first",
                p.kappa
            ));
        }
        let g = p.kappa.sqrt();
        Self::new(g, g - p.rho_minus / g, g - p.rho_plus / g)
    }
}

/// κ ↦ 16/κ with the force points transported so that the moment formula is
/// unchanged.
pub fn duality_map(p: &SleParams) -> Result<SleParams> {
    if !(p.kappa > 4.0) {
        return domain(format!("duality map is for kappa > 4, got {}", p.kappa));
    }
    if !(p.rho_plus > 0.5 * p.kappa - 4.0) {
        return domain(format!("rho_plus = {} must exceed kappa/2 - 4", p.rho_plus));
    }
    let k = 16.0 / p.kappa;
    Ok(SleParams {
        kappa: k,
        rho_minus: 0.5 * k - 2.0 + 0.25 * k * p.rho_minus,
        rho_plus: k + 0.25 * k * p.rho_plus - 4.0,
    })
}

/// Both roots of `1 − (α/2)(Q_κ − α/2) = λ`, i.e. `α = Q_κ ± √(Q_κ² − 4(1−λ))`;
/// the first has the smaller real part (or negative imaginary part).
pub fn alpha_roots(lambda: f64, kappa: f64) -> (Complex64, Complex64) {
    let s = kappa.sqrt();
    roots_for_q(lambda, 0.5 * s + 2.0 / s)
}

pub(crate) fn roots_for_q(lambda: f64, q: f64) -> (Complex64, Complex64) {
    let disc = q * q - 4.0 * (1.0 - lambda);
    if disc >= 0.0 {
        let r = disc.sqrt();
        // the smaller root via the product 4(1-λ) to avoid cancellation
        let big = q + r;
        let small = if big != 0.0 {
            4.0 * (1.0 - lambda) / big
        } else {
            q - r
        };
        (Complex64::new(small, 0.0), Complex64::new(big, 0.0))
    } else {
        let r = (-disc).sqrt();
        (Complex64::new(q, -r), Complex64::new(q, r))
    }
}

/// A moment query: λ, both α roots and λ₀.
#[derive(Clone, Copy, Debug)]
pub struct MomentQuery {
    pub lambda: f64,
    pub alpha_roots: (Complex64, Complex64),
    pub lambda0: f64,
}

impl MomentQuery {
    pub fn new(lambda: f64, p: &SleParams) -> Self {
        MomentQuery {
            lambda,
            alpha_roots: alpha_roots(lambda, p.kappa),
            lambda0: p.lambda0(),
        }
    }
}

/// Boundary cosmological constants μ₁, μ₂ ≥ 0 and the matching σ_j, with
/// `μ_j = exp(iπγ(σ_j − Q/2))`, `Re σ_j = Q/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryCosmology {
    pub mu1: f64,
    pub mu2: f64,
    pub sigma1: Complex64,
    pub sigma2: Complex64,
}

impl BoundaryCosmology {
    pub fn new(mu1: f64, mu2: f64, gamma: f64) -> Result<Self> {
        if !(mu1 >= 0.0 && mu2 >= 0.0) || (mu1 == 0.0 && mu2 == 0.0) {
            return domain(format!(
                "cosmological constants ({mu1}, {mu2}) must be >= 0, not both 0"
            ));
        }
        let q = background_charge(gamma);
        let sigma = |mu: f64| {
            // σ = Q/2 − i ln μ / (πγ); unused when μ = 0.
            let im = if mu > 0.0 {
                -mu.ln() / (std::f64::consts::PI * gamma)
            } else {
                0.0
            };
            Complex64::new(0.5 * q, im)
        };
        Ok(BoundaryCosmology {
            mu1,
            mu2,
            sigma1: sigma(mu1),
            sigma2: sigma(mu2),
        })
    }

    pub fn one_sided(mu: f64, gamma: f64) -> Result<Self> {
        Self::new(mu, 0.0, gamma)
    }

    pub fn is_one_sided(&self) -> bool {
        self.mu1 == 0.0 || self.mu2 == 0.0
    }
}
