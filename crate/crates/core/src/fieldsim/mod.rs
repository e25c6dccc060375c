//! One-dimensional stochastic building blocks of the boundary Liouville
//! field: the conditioned radial process, the two-sided drifted process and
//! its recentred counterpart, and discrete boundary chaos on the strip and
//! on `(0, 1)` with moment estimators.

mod brownian;
mod field;
mod gmc;
mod kernel;

pub use brownian::{
    equivalence_functionals, equivalence_test, gaussian_tail_time_integral,
    sample_conditioned_drift_bm, sample_recentred, sample_two_sided, EquivalenceReport,
    Functionals, ProcessKind, ProcessSample, FUNCTIONAL_NAMES,
};
pub use field::{
    log_cell_matrix, BoundaryFieldGrid, DenseGaussian, IntervalGrid, IntervalSampler, StripGrid,
    StripSampler, MAX_CELLS,
};
pub use gmc::{
    gmc_boundary_measure, interval_cell_weights, interval_exponent, interval_mean_mass,
    mc_interval_moment, mc_interval_moment_with, mc_reflection_moment, mc_reflection_moment_with,
    mc_strip_mass, radial_exp_moment, reflection_exponent, sample_interval_field,
    sample_strip_boundary_field, strip_mean_mass, GmcEstimate, GmcMeasure, MAX_REFLECTION_EXPONENT,
    VARIANCE_FLAG,
};
pub use kernel::{lateral_cell_cov, lateral_kernel, log_cell_cov, radial_covariance, strip_green};
