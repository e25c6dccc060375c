//! F(x, κ, ρ₋, ρ₊) and the moment E[ψ′(1)^λ] = F(α)/F(√κ).

use num_complex::Complex64;

use super::params::{alpha_roots, SleParams};
use super::real_part;
use crate::error::{Error, Result};
use crate::specfun::{ln_double_gamma, wrap_log};

type C = Complex64;

/// The four `Γ_{√κ/2}` arguments of F: two numerator, two denominator.
pub fn f_arguments(x: C, p: &SleParams) -> [C; 4] {
    let s = p.kappa.sqrt();
    let (rm, rp) = (p.rho_minus, p.rho_plus);
    [
        2.0 / s - 0.5 * s + rp / s + 0.5 * x,
        4.0 / s + rp / s - 0.5 * x,
        4.0 / s - 0.5 * s + (rm + rp) / s + 0.5 * x,
        6.0 / s + (rm + rp) / s - 0.5 * x,
    ]
}

/// `ln F(x, κ, ρ₋, ρ₊)`.
pub fn ln_f(x: C, p: &SleParams) -> Result<C> {
    let b = 0.5 * p.kappa.sqrt();
    let [n1, n2, d1, d2] = f_arguments(x, p);
    Ok(ln_double_gamma(b, n1)? + ln_double_gamma(b, n2)?
        - ln_double_gamma(b, d1)?
        - ln_double_gamma(b, d2)?)
}

/// `F(x, κ, ρ₋, ρ₊)`.
pub fn f_value(x: C, p: &SleParams) -> Result<C> {
    crate::specfun::checked_exp(ln_f(x, p)?)
}

/// Tolerance for the two roots of the α-equation to agree.
pub const ROOT_AGREEMENT: f64 = 1e-10;

/// `E[ψ′(1)^λ]`: `F(α)/F(√κ)` for `λ < λ₀`, `+∞` otherwise.
///
/// Both roots α are evaluated and must agree; disagreement is reported as
/// [`Error::Consistency`].
pub fn sle_derivative_moment(lambda: f64, p: &SleParams) -> Result<f64> {
    p.validate()?;
    if lambda >= p.lambda0() {
        return Ok(f64::INFINITY);
    }
    let base = ln_f(C::new(p.kappa.sqrt(), 0.0), p)?;
    let (a1, a2) = alpha_roots(lambda, p.kappa);
    let l1 = ln_f(a1, p)? - base;
    let l2 = ln_f(a2, p)? - base;
    let gap = wrap_log(l1 - l2).norm();
    if gap > ROOT_AGREEMENT {
        return Err(Error::Consistency(format!(
            "alpha roots {a1} and {a2} give log-moments differing by {gap:.3e}"
        )));
    }
    real_part(l1, ROOT_AGREEMENT, "moment")
}
