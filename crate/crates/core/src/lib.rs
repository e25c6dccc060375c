//! Exact integrability formulas for SLE derivative moments and boundary
//! Liouville quantities, with Monte Carlo engines that check them.

pub mod error;
pub mod exact;
pub mod fieldsim;
pub mod harness;
pub mod loewner;
pub mod mc;
pub mod quad;
pub mod specfun;
pub mod stats;

pub use error::{Error, Result};
