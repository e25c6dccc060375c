//! The moment `m^λ_γ(β₋, β₊) = E[ψ′(1)^λ]` written in Liouville variables:
//! the special insertions β₋ ∈ {γ, Q} (classical Γ ratios), the general
//! six-factor Γ_{γ/2} product and its shift relations.

use num_complex::Complex64;

use super::params::{background_charge, roots_for_q};
use super::real_part;
use crate::error::{Error, Result};
use crate::specfun::{gauss_2f1_at_one, ln_double_gamma, log_gamma_complex, wrap_log};

type C = Complex64;

/// Which special insertion β₋ is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Insertion {
    /// β₋ = γ (ρ₋ = 0).
    Gamma,
    /// β₋ = Q (ρ₋ = κ/2 − 2).
    Q,
}

impl Insertion {
    /// The scale `k` multiplying the Γ arguments: 2/γ or γ/2.
    fn scale(self, gamma: f64) -> f64 {
        match self {
            Insertion::Gamma => 2.0 / gamma,
            Insertion::Q => 0.5 * gamma,
        }
    }

    pub fn beta_minus(self, gamma: f64) -> f64 {
        match self {
            Insertion::Gamma => gamma,
            Insertion::Q => background_charge(gamma),
        }
    }
}

/// `λ₀` in terms of β₊ (ρ₊ = γ² − γβ₊).
pub fn lambda0_beta(beta_plus: f64, gamma: f64) -> f64 {
    let k = gamma * gamma;
    let rp = k - gamma * beta_plus;
    (rp + 2.0) * (rp + 4.0 - 0.5 * k) / k
}

fn check_beta(b: f64, gamma: f64) -> Result<()> {
    let top = background_charge(gamma) + 0.5 * gamma;
    if !(b < top) {
        return Err(Error::Domain(format!(
            "insertion {b} must be below Q + γ/2 = {top}"
        )));
    }
    Ok(())
}

fn agree(l1: C, l2: C, what: &str) -> Result<C> {
    let gap = wrap_log(l1 - l2).norm();
    if gap > 1e-10 {
        return Err(Error::Consistency(format!(
            "{what}: roots disagree by {gap:.3e}"
        )));
    }
    Ok(l1)
}

fn ln_special(which: Insertion, alpha: C, beta_plus: f64, gamma: f64) -> Result<C> {
    let q = background_charge(gamma);
    let k = which.scale(gamma);
    let e = q - beta_plus;
    Ok(
        log_gamma_complex(k * (e + 0.5 * alpha))? + log_gamma_complex(k * (q + e - 0.5 * alpha))?
            - log_gamma_complex(C::new(k * (e + 0.5 * gamma), 0.0))?
            - log_gamma_complex(C::new(k * (e + 2.0 / gamma), 0.0))?,
    )
}

/// `m^λ_γ(γ, β₊)` or `m^λ_γ(Q, β₊)` as a ratio of four classical Γ values.
pub fn m_special(which: Insertion, lambda: f64, beta_plus: f64, gamma: f64) -> Result<f64> {
    check_beta(beta_plus, gamma)?;
    if lambda >= lambda0_beta(beta_plus, gamma) {
        return Ok(f64::INFINITY);
    }
    let (a1, a2) = roots_for_q(lambda, background_charge(gamma));
    let l = agree(
        ln_special(which, a1, beta_plus, gamma)?,
        ln_special(which, a2, beta_plus, gamma)?,
        "m_special",
    )?;
    real_part(l, 1e-10, "m_special")
}

/// The same quantity as ₂F₁(a′, b′; c′; 1) with
/// `a′ = k(α/2 − γ/2)`, `b′ = k(α/2 − 2/γ)`, `c′ = k(Q − β₊ + α/2)`,
/// evaluated by Gauss's theorem at the root where it converges.
pub fn m_special_hypergeometric(
    which: Insertion,
    lambda: f64,
    beta_plus: f64,
    gamma: f64,
) -> Result<f64> {
    check_beta(beta_plus, gamma)?;
    let q = background_charge(gamma);
    let k = which.scale(gamma);
    let (a1, _) = roots_for_q(lambda, q);
    let ap = k * (0.5 * a1 - 0.5 * gamma);
    let bp = k * (0.5 * a1 - 2.0 / gamma);
    let cp = k * (q - beta_plus + 0.5 * a1);
    let v = gauss_2f1_at_one(ap, bp, cp)?;
    if v.im.abs() > 1e-10 * v.norm() {
        return Err(Error::Consistency(format!(
            "hypergeometric value {v} is not real"
        )));
    }
    Ok(v.re)
}

/// `ln m^λ_γ(β₋, β₊)` for one root α of `1 − (α/2)(Q − α/2) = λ`.
pub fn ln_m_general(alpha: C, beta_minus: f64, beta_plus: f64, gamma: f64) -> Result<C> {
    let b = 0.5 * gamma;
    let q = background_charge(gamma);
    let s = beta_minus + beta_plus;
    let g = |z: C| ln_double_gamma(b, z);
    let r = |x: f64| C::new(x, 0.0);
    Ok(g(r(2.0 * q + gamma - s))? + g(r(3.0 * q - s))?
        - g(2.0 * q + b - s + 0.5 * alpha)?
        - g(3.0 * q + b - s - 0.5 * alpha)?
        + g(q - beta_plus + 0.5 * alpha)?
        + g(2.0 * q - beta_plus - 0.5 * alpha)?
        - g(r(q - beta_plus + b))?
        - g(r(q - beta_plus + 2.0 / gamma))?)
}

/// The general moment formula in Liouville variables.
pub fn m_general(lambda: f64, beta_minus: f64, beta_plus: f64, gamma: f64) -> Result<f64> {
    check_beta(beta_minus, gamma)?;
    check_beta(beta_plus, gamma)?;
    if lambda >= lambda0_beta(beta_plus, gamma) {
        return Ok(f64::INFINITY);
    }
    let (a1, a2) = roots_for_q(lambda, background_charge(gamma));
    let l = agree(
        ln_m_general(a1, beta_minus, beta_plus, gamma)?,
        ln_m_general(a2, beta_minus, beta_plus, gamma)?,
        "m_general",
    )?;
    real_part(l, 1e-10, "m_general")
}

/// Which shift of β₋ the relation describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftBy {
    TwoOverGamma,
    HalfGamma,
}

/// Predicted `m(β₋ − s, β₊) / m(β₋, β₊)` for `s ∈ {2/γ, γ/2}`.
pub fn m_shift_ratio(
    by: ShiftBy,
    lambda: f64,
    beta_minus: f64,
    beta_plus: f64,
    gamma: f64,
) -> Result<f64> {
    let q = background_charge(gamma);
    let k = match by {
        ShiftBy::TwoOverGamma => 2.0 / gamma,
        ShiftBy::HalfGamma => 0.5 * gamma,
    };
    let s = beta_minus + beta_plus;
    let b = 0.5 * gamma;
    let (a1, a2) = roots_for_q(lambda, q);
    let ratio = |alpha: C| -> Result<C> {
        Ok(log_gamma_complex(k * (2.0 * q + b - s + 0.5 * alpha))?
            + log_gamma_complex(k * (3.0 * q + b - s - 0.5 * alpha))?
            - log_gamma_complex(C::new(k * (2.0 * q + gamma - s), 0.0))?
            - log_gamma_complex(C::new(k * (3.0 * q - s), 0.0))?)
    };
    let l = agree(ratio(a1)?, ratio(a2)?, "shift ratio")?;
    real_part(l, 1e-10, "shift ratio")
}
