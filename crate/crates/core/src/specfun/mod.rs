//! Special functions: complex `ln Γ`, the double gamma `Γ_b`, the double sine
//! `S_b`, and Gauss's ₂F₁ summation at 1.

mod double_gamma;
mod gamma;
mod hypergeometric;

pub(crate) use double_gamma::checked_exp;
pub use double_gamma::{
    double_gamma, double_gamma_pole_distance, double_sine, ln_double_gamma, ln_double_gamma_via,
    log_double_gamma, log_double_sine, wrap_log, DoubleGammaParam, Shift,
};
pub use gamma::{gamma, gamma_complex, gamma_pole_distance, ln_gamma, log_gamma_complex};
pub use hypergeometric::gauss_2f1_at_one;
