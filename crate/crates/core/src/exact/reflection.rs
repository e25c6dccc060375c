//! Boundary reflection coefficients R̄, R and the three-point constants H̄, H.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::params::{background_charge, BoundaryCosmology};
use super::real_part;
use crate::error::Result;
use crate::specfun::{ln_double_gamma, ln_gamma, log_double_sine, log_gamma_complex};

type C = Complex64;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

/// `ln(ε Γ_b(ε))`, analytic through ε = 0 (one 1/b-shift absorbs the pole).
fn ln_eps_double_gamma(b: f64, eps: f64) -> Result<C> {
    let s = 1.0 / b;
    Ok(log_gamma_complex(c(1.0 + s * eps))? - s.ln() - 0.5 * LN_2PI
        + (0.5 - s * eps) * s.ln()
        + ln_double_gamma(b, c(eps + s))?)
}

/// The μ-independent part of `ln R̄` with the `1/((Q−β)Γ_b(Q−β))` factor
/// combined so that β = Q is a regular point.
fn ln_reflection_core(beta: f64, gamma: f64) -> Result<C> {
    let b = 0.5 * gamma;
    let e = background_charge(gamma) - beta;
    let pre = (2.0 * e / gamma - 0.5) * LN_2PI + (0.5 * gamma * e - 0.5) * (2.0 / gamma).ln()
        - (2.0 * e / gamma) * ln_gamma(1.0 - 0.25 * gamma * gamma)?;
    Ok(pre + ln_double_gamma(b, c(beta - b))? - ln_eps_double_gamma(b, e)?)
}

/// `ln R̄(β, μ₁, μ₂)`.
pub fn ln_reflection_bar(beta: f64, cosmo: &BoundaryCosmology, gamma: f64) -> Result<C> {
    let q = background_charge(gamma);
    let e = q - beta;
    let core = ln_reflection_core(beta, gamma)?;
    if cosmo.is_one_sided() {
        let mu = cosmo.mu1.max(cosmo.mu2);
        return Ok(core + 2.0 * e / gamma * mu.ln());
    }
    let b = 0.5 * gamma;
    let (s1, s2) = (cosmo.sigma1, cosmo.sigma2);
    let phase = C::new(0.0, PI) * (s1 + s2 - q) * e;
    Ok(core + phase
        - log_double_sine(b, 0.5 * beta + s2 - s1)?
        - log_double_sine(b, 0.5 * beta + s1 - s2)?)
}

/// Normalized reflection coefficient `R̄(β, μ₁, μ₂)` (equal to 1 at β = Q).
pub fn reflection_bar(beta: f64, cosmo: &BoundaryCosmology, gamma: f64) -> Result<f64> {
    real_part(
        ln_reflection_bar(beta, cosmo, gamma)?,
        1e-9,
        "reflection_bar",
    )
}

/// `ln R = ln(−Γ(1 − (2/γ)(Q−β))) + ln R̄`.
pub fn ln_reflection(beta: f64, cosmo: &BoundaryCosmology, gamma: f64) -> Result<C> {
    let e = background_charge(gamma) - beta;
    Ok(C::new(0.0, PI)
        + log_gamma_complex(c(1.0 - 2.0 * e / gamma))?
        + ln_reflection_bar(beta, cosmo, gamma)?)
}

/// Unnormalized reflection coefficient `R(β, μ₁, μ₂) = −Γ(1 − (2/γ)(Q−β)) R̄`.
pub fn reflection(beta: f64, cosmo: &BoundaryCosmology, gamma: f64) -> Result<f64> {
    real_part(ln_reflection(beta, cosmo, gamma)?, 1e-9, "reflection")
}

/// `ln H̄^{(β,β,α)}_{(0,1,0)}`.
pub fn ln_h_bar(beta: f64, alpha: f64, gamma: f64) -> Result<C> {
    let b = 0.5 * gamma;
    let e = background_charge(gamma) - beta;
    let base =
        (2.0 * PI).ln() - 0.25 * gamma * gamma * b.ln() - ln_gamma(1.0 - 0.25 * gamma * gamma)?;
    let g = |z: f64| ln_double_gamma(b, c(z));
    Ok((2.0 / gamma) * (e - 0.5 * alpha) * base
        + 2.0 * g(0.5 * alpha)?
        + g(e + 0.5 * alpha)?
        + g(beta + 0.5 * alpha - b)?
        - g(2.0 / gamma)?
        - 2.0 * g(e)?
        - g(alpha)?)
}

pub fn h_bar(beta: f64, alpha: f64, gamma: f64) -> Result<f64> {
    real_part(ln_h_bar(beta, alpha, gamma)?, 1e-9, "h_bar")
}

/// `ln H = ln((2/γ) Γ((2/γ)(α/2 + β − Q))) + ln H̄`.
pub fn ln_h(beta: f64, alpha: f64, gamma: f64) -> Result<C> {
    let e = background_charge(gamma) - beta;
    Ok((2.0 / gamma).ln()
        + log_gamma_complex(c((2.0 / gamma) * (0.5 * alpha - e)))?
        + ln_h_bar(beta, alpha, gamma)?)
}

pub fn h(beta: f64, alpha: f64, gamma: f64) -> Result<f64> {
    real_part(ln_h(beta, alpha, gamma)?, 1e-9, "h")
}
