//! Classical Gamma function on the complex plane.

use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1))
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Distance from `z` to the nearest pole of Γ (a nonpositive integer);
/// infinite when `Re z > 0.5`.
pub fn gamma_pole_distance(z: Complex64) -> f64 {
    if z.re > 0.5 {
        return f64::INFINITY;
    }
    let n = z.re.round().min(0.0);
    (z - n).norm()
}

/// Principal-branch `ln Γ(z)`: analytic on ℂ minus `(-∞, 0]` and real on the
/// positive axis. For real negative `z` the imaginary part is a multiple of
/// π, so `exp` recovers the sign of Γ.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    let dist = gamma_pole_distance(z);
    if dist < 1e-12 {
        return Err(Error::Pole { z, dist });
    }
    // Upward recurrence keeps the branch continuous off the real axis, which
    // the reflection formula would not.
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while w.re < 15.0 {
        acc += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - acc)
}

/// `ln |Γ(x)|` for real `x`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    Ok(log_gamma_complex(Complex64::new(x, 0.0))?.re)
}

/// Γ(x) for real `x`, with sign.
pub fn gamma(x: f64) -> Result<f64> {
    Ok(log_gamma_complex(Complex64::new(x, 0.0))?.exp().re)
}

/// Γ(x) as a complex number (poles reported as errors).
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma_complex(z)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        assert!(log_gamma_complex(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma_complex(c(2.0, 0.0)).unwrap().norm() < 1e-14);
        let half = log_gamma_complex(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
        assert!((gamma(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma(-0.5).unwrap() + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn poles_detected() {
        assert!(matches!(
            log_gamma_complex(c(-3.0, 0.0)),
            Err(Error::Pole { .. })
        ));
        assert!(matches!(
            log_gamma_complex(c(0.0, 1e-13)),
            Err(Error::Pole { .. })
        ));
        assert!(log_gamma_complex(c(-3.0, 1e-9)).is_ok());
    }

    #[test]
    fn recurrence_holds_off_axis() {
        for &(x, y) in &[(0.3, 2.0), (-4.2, 0.7), (12.0, -9.0), (-0.5, -3.0)] {
            let z = c(x, y);
            let lhs = log_gamma_complex(z + 1.0).unwrap();
            let rhs = log_gamma_complex(z).unwrap() + z.ln();
            let d = lhs - rhs;
            let k = (d.im / (2.0 * std::f64::consts::PI)).round();
            assert!(
                (d - c(0.0, 2.0 * std::f64::consts::PI * k)).norm() < 1e-13,
                "{z}"
            );
        }
    }
}
