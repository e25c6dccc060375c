//! Boundary Gaussian multiplicative chaos on the strip and on an interval:
//! Monte Carlo moments after two-resolution extrapolation, against R̄ and H̄.

use weldbench::exact::{background_charge, h_bar, reflection_bar, BoundaryCosmology};
use weldbench::fieldsim::{mc_interval_moment, mc_reflection_moment, IntervalGrid, StripGrid};

fn main() -> weldbench::Result<()> {
    let gamma = 1.0;
    let beta = 0.9 * background_charge(gamma);
    let c = BoundaryCosmology::new(1.0, 1.0, gamma)?;
    let est = mc_reflection_moment(beta, &c, gamma, 500, StripGrid::new(100.0, 4096, true)?, 1)?;
    println!(
        "strip: fine {:.4}, coarse {:.4}, extrapolated {:.4} ± {:.4}; R̄ = {:.4}",
        est.fine.mean,
        est.coarse.mean,
        est.extrapolated.mean,
        est.extrapolated.stderr,
        reflection_bar(beta, &c, gamma)?
    );
    let grid = IntervalGrid {
        cells: 512,
        grading: 2.0,
    };
    let est = mc_interval_moment(0.6, 2.4, 1.2, 2000, grid, 2)?;
    println!(
        "interval: extrapolated {:.4} ± {:.4}; H̄ = {:.4}",
        est.extrapolated.mean,
        est.extrapolated.stderr,
        h_bar(0.6, 2.4, 1.2)?
    );
    Ok(())
}
