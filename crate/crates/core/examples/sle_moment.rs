//! Closed-form derivative moments E[ψ'(1)^λ] of SLE_κ(ρ₋;ρ₊), the blow-up
//! exponent λ₀ and the κ ↦ 16/κ duality.

use weldbench::exact::{duality_map, sle_derivative_moment, LqgParams, SleParams};

fn main() -> weldbench::Result<()> {
    let p = SleParams::new(2.0, 0.0, 0.5)?;
    println!("κ = 2, ρ₋ = 0, ρ₊ = 0.5: λ₀ = {:.6}", p.lambda0());
    for lam in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, p.lambda0()] {
        println!("  λ = {lam:>8.4}: {:.10}", sle_derivative_moment(lam, &p)?);
    }
    let lq = LqgParams::from_sle(&p)?;
    println!(
        "Liouville side: γ = {:.4}, W₋ = {:.4}, W₊ = {:.4}",
        lq.gamma, lq.w_minus, lq.w_plus
    );

    let q = SleParams::new(8.0, 1.0, 2.5)?;
    let d = duality_map(&q)?;
    println!(
        "dual of κ = 8, ρ = (1, 2.5): κ' = {}, ρ' = ({:.4}, {:.4})",
        d.kappa, d.rho_minus, d.rho_plus
    );
    println!(
        "  moments at λ = -1: {:.12} vs {:.12}",
        sle_derivative_moment(-1.0, &q)?,
        sle_derivative_moment(-1.0, &d)?
    );
    Ok(())
}
