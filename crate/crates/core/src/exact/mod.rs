//! Closed-form quantities: the SLE derivative moment, reflection
//! coefficients, disk boundary-length laws and their Liouville-side
//! counterparts.

mod derivative;
mod disk;
mod m_lambda;
mod params;
mod reflection;

pub use derivative::{f_arguments, f_value, ln_f, sle_derivative_moment, ROOT_AGREEMENT};
pub use disk::{
    disk_laplace, disk_length_joint_density, disk_length_marginal_density, laplace_taylor_order,
    mot_constant,
};
pub use m_lambda::{
    lambda0_beta, ln_m_general, m_general, m_shift_ratio, m_special, m_special_hypergeometric,
    Insertion, ShiftBy,
};
pub use params::{
    alpha_roots, background_charge, beta_from_weight, duality_map, lambda0, weight_from_beta,
    BoundaryCosmology, LqgParams, MomentQuery, SleParams,
};
pub use reflection::{
    h, h_bar, ln_h, ln_h_bar, ln_reflection, ln_reflection_bar, reflection, reflection_bar,
};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `exp(l)` as a real number, after checking that the imaginary part is
/// negligible relative to the modulus.
pub(crate) fn real_part(l: Complex64, tol: f64, what: &str) -> Result<f64> {
    if l.re > 709.0 {
        return Err(Error::Overflow(l.re));
    }
    let v = l.exp();
    if v.im.abs() > tol * v.norm() {
        return Err(Error::Consistency(format!(
            "{what} has imaginary residue {v}"
        )));
    }
    Ok(v.re)
}
