use num_complex::Complex64;

use super::gamma::{gamma_pole_distance, log_gamma_complex};
use crate::error::{domain, Result};

/// ₂F₁(a, b; c; 1) by Gauss's summation theorem,
/// `Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b))`, valid for `Re(c - a - b) > 0`.
pub fn gauss_2f1_at_one(a: Complex64, b: Complex64, c: Complex64) -> Result<Complex64> {
    let s = c - a - b;
    if !(s.re > 0.0) {
        return domain(format!("Gauss summation needs Re(c-a-b) > 0, got {s}"));
    }
    // A pole in the denominator makes the series terminate at value 0.
    if gamma_pole_distance(c - a) < 1e-12 || gamma_pole_distance(c - b) < 1e-12 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let l = log_gamma_complex(c)? + log_gamma_complex(s)?
        - log_gamma_complex(c - a)?
        - log_gamma_complex(c - b)?;
    Ok(l.exp())
}
