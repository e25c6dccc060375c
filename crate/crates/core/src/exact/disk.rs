//! Boundary-length laws of quantum disks.

use super::params::{background_charge, beta_from_weight, BoundaryCosmology};
use super::reflection::{reflection, reflection_bar};
use crate::error::{domain, Result};
use crate::specfun::ln_gamma;

/// Joint density of the (left, right) boundary lengths of a weight-`w` disk,
/// `w ∈ {2, γ²/2}`, where the mating-of-trees description makes it explicit.
pub fn disk_length_joint_density(w: f64, l: f64, r: f64, gamma: f64) -> Result<f64> {
    if !(l > 0.0 && r > 0.0) {
        return domain("boundary lengths must be positive");
    }
    let g2 = gamma * gamma;
    let a = 4.0 / g2;
    if (w - 2.0).abs() < 1e-12 {
        Ok(mot_constant(gamma)? * (l + r).powf(-a - 1.0))
    } else if (w - 0.5 * g2).abs() < 1e-12 {
        // a (lr)^{a-1} / (l^a + r^a)^2 = (a / lr) x / (1+x)^2 with x = (l/r)^a
        let x = (l / r).powf(a);
        Ok(a / (l * r) * x / ((1.0 + x) * (1.0 + x)))
    } else {
        domain(format!(
            "explicit joint density only for W = 2 or γ²/2, got {w}"
        ))
    }
}

/// `(2π)^{4/γ²−1} / ((1−γ²/4) Γ(1−γ²/4)^{4/γ²})`.
pub fn mot_constant(gamma: f64) -> Result<f64> {
    let g2 = gamma * gamma;
    let a = 4.0 / g2;
    let x = 1.0 - 0.25 * g2;
    Ok(((a - 1.0) * (2.0 * std::f64::consts::PI).ln() - x.ln() - a * ln_gamma(x)?).exp())
}

fn check_weight(w: f64, gamma: f64) -> Result<f64> {
    let top = gamma * background_charge(gamma);
    if !(w > 0.0 && w < top) {
        return domain(format!("weight {w} outside (0, γQ) = (0, {top})"));
    }
    Ok(beta_from_weight(gamma, w))
}

/// Density of `μ₁L₁ + μ₂L₂` at `l`: `R̄(β, μ₁, μ₂) l^{−2W/γ²}` with
/// `β = γ + 2/γ − W/γ`. Thick and thin disks share the formula.
pub fn disk_length_marginal_density(
    w: f64,
    cosmo: &BoundaryCosmology,
    l: f64,
    gamma: f64,
) -> Result<f64> {
    let beta = check_weight(w, gamma)?;
    if !(l > 0.0) {
        return domain("length must be positive");
    }
    Ok(reflection_bar(beta, cosmo, gamma)? * l.powf(-2.0 * w / (gamma * gamma)))
}

/// Number of Taylor terms subtracted from `e^{−x}` to make the Laplace
/// functional of a weight-`w` disk finite: `⌊2W/γ²⌋` (0 for thin disks).
pub fn laplace_taylor_order(w: f64, gamma: f64) -> usize {
    (2.0 * w / (gamma * gamma)).floor().max(0.0) as usize
}

/// `M[e^{−μ₁L₁−μ₂L₂} − P_n(−μ₁L₁−μ₂L₂)] = γ/(2(Q−β)) · R(β; μ₁, μ₂)`, with
/// `P_n` the n-term Taylor polynomial of `exp` and `n` from
/// [`laplace_taylor_order`].
pub fn disk_laplace(w: f64, cosmo: &BoundaryCosmology, gamma: f64) -> Result<f64> {
    let beta = check_weight(w, gamma)?;
    let e = background_charge(gamma) - beta;
    Ok(0.5 * gamma / e * reflection(beta, cosmo, gamma)?)
}
