//! Evaluate the double gamma function and check its shift equations.

use num_complex::Complex64;
use weldbench::specfun::{double_gamma, log_double_gamma, log_gamma_complex, wrap_log};

fn main() -> weldbench::Result<()> {
    let b = 0.9;
    let centre = 0.5 * (b + 1.0 / b);
    println!(
        "Γ_b at the centre (b = {b}): {}",
        double_gamma(b, Complex64::new(centre, 0.0))?
    );
    let ln_s = |s: f64| s.ln();
    for z in [
        Complex64::new(0.3, 0.0),
        Complex64::new(1.2, 0.7),
        Complex64::new(2.5, -1.5),
    ] {
        for s in [b, 1.0 / b] {
            let lhs = log_double_gamma(b, z)? - log_double_gamma(b, z + s)?;
            let rhs = log_gamma_complex(s * z)? - 0.5 * (2.0 * std::f64::consts::PI).ln()
                + (0.5 - s * z) * ln_s(s);
            println!(
                "z = {z:.2}, shift {s:.4}: residual {:.2e}",
                (wrap_log(lhs - rhs).exp() - 1.0).norm()
            );
        }
    }
    Ok(())
}
