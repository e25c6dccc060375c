//! Boundary-length laws of quantum disks: the joint density of the two arc
//! lengths, its total mass, and the marginal under a cosmological constant.

use weldbench::exact::{
    disk_length_joint_density, disk_length_marginal_density, reflection_bar, BoundaryCosmology,
};
use weldbench::quad::{integrate_to_infinity, QuadOpts};

fn main() -> weldbench::Result<()> {
    let gamma = 1.0;
    for r in [0.1, 1.0, 10.0] {
        println!(
            "weight 2, left 1, right {r}: {:.8e}",
            disk_length_joint_density(2.0, 1.0, r, gamma)?
        );
    }
    let mass = integrate_to_infinity(
        |r| disk_length_joint_density(2.0, 1.0, r, gamma).unwrap_or(f64::NAN),
        0.0,
        QuadOpts::default(),
    )?;
    let one = BoundaryCosmology::one_sided(1.0, gamma)?;
    println!(
        "∫ density over the right length = {:.12}, R̄(γ, 1, 0) = {:.12}",
        mass.value,
        reflection_bar(gamma, &one, gamma)?
    );
    let c = BoundaryCosmology::new(1.0, 0.5, gamma)?;
    for l in [0.5, 1.0, 2.0] {
        println!(
            "marginal density of the left length at {l} (μ = (1, 0.5)): {:.8e}",
            disk_length_marginal_density(2.0, &c, l, gamma)?
        );
    }
    Ok(())
}
