use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {z} is within {dist:.3e} of a pole")]
    Pole { z: Complex64, dist: f64 },
    #[error("quadrature did not converge: error bound {achieved:.3e} > target {target:.3e}")]
    Quadrature { achieved: f64, target: f64 },
    #[error("log-magnitude {0:.3e} overflows f64; use the log-scale variant")]
    Overflow(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("branch disagreement: {0}")]
    Consistency(String),
    #[error("matrix is not positive definite (pivot {pivot} = {value:.3e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
