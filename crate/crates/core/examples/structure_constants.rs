//! Boundary reflection coefficient R̄, its unit-normalised form R, and the
//! three-point constants H̄/H.

use weldbench::exact::{
    background_charge, h, h_bar, reflection, reflection_bar, BoundaryCosmology,
};

fn main() -> weldbench::Result<()> {
    let gamma = 1.0;
    let q = background_charge(gamma);
    for (mu1, mu2) in [(1.0, 0.0), (1.0, 1.0), (0.5, 2.0)] {
        let c = BoundaryCosmology::new(mu1, mu2, gamma)?;
        for beta in [1.2, 1.9, q] {
            let r = reflection(beta, &c, gamma)?;
            let r2 = reflection(2.0 * q - beta, &c, gamma)?;
            println!(
                "μ = ({mu1}, {mu2}), β = {beta:.3}: R̄ = {:.8}, R(β)R(2Q-β) = {:.12}",
                reflection_bar(beta, &c, gamma)?,
                r * r2
            );
        }
    }
    for (beta, alpha) in [(1.8, 1.8), (0.5, 2.5)] {
        println!(
            "β = {beta}, α = {alpha}: H̄ = {:.8}, H = {:.8}",
            h_bar(beta, alpha, gamma)?,
            h(beta, alpha, gamma)?
        );
    }
    Ok(())
}
