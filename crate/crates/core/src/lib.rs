//! Exact and floating-point verification toolkit for Clifford analysis:
//! monogenic polynomial spaces, Rarita-Schwinger kernels, conformal
//! covariance and sphere/ball quadrature.

pub mod checks;
pub mod clifford;
pub mod conformal;
pub mod error;
pub mod integral;
pub mod kernel_io;
pub mod monogenic;
pub mod numeric;
pub mod poly;
pub mod quadrature;
pub mod radial;
pub mod rarita;
pub mod report;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
