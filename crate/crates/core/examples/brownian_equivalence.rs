//! Two constructions of a drifted two-sided Brownian motion seen from
//! level -M: conditioning on the value at 0, and recentring the unbiased
//! process at a uniform time spent above -M. KS tests on four functionals.

use weldbench::fieldsim::{equivalence_test, gaussian_tail_time_integral, FUNCTIONAL_NAMES};

fn main() -> weldbench::Result<()> {
    for a in [0.5, 1.0, 2.0] {
        println!(
            "∫ P[Z > a√t] dt at a = {a}: {:.12} (1/(2a²) = {:.12})",
            gaussian_tail_time_integral(a)?,
            0.5 / (a * a)
        );
    }
    let r = equivalence_test(1.0, 0.5, 3000, 17)?;
    for (name, p) in FUNCTIONAL_NAMES.iter().zip(r.p_values) {
        println!("{name:>22}: KS p = {p:.3}");
    }
    Ok(())
}
