//! Simulate ψ'(1) for SLE_κ(ρ₋;ρ₊) and compare Monte Carlo moments with the
//! closed form.

use weldbench::exact::{sle_derivative_moment, SleParams};
use weldbench::loewner::{sample_psi_prime, SimConfig};

fn main() -> weldbench::Result<()> {
    let p = SleParams::new(2.0, 0.0, 0.5)?;
    let n = 20_000;
    let s = sample_psi_prime(&p, n, &SimConfig::default(), 2024)?;
    println!(
        "{} of {n} paths accepted ({} not converged, {} swallowed)",
        s.values.len(),
        s.not_converged,
        s.swallowed
    );
    for lam in [-1.0, -0.5, 0.5] {
        let m = s.moment(lam);
        let exact = sle_derivative_moment(lam, &p)?;
        println!(
            "λ = {lam:>5}: {:.5} ± {:.5}  closed form {exact:.5}  z = {:+.2}",
            m.mean,
            m.stderr,
            (m.mean - exact) / m.stderr
        );
    }
    Ok(())
}
