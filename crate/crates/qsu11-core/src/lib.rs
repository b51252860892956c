//! Exact symbolic calculus for a pair of quantum homogeneous spaces: normally
//! ordered elements over two radial grids, a covariant module-algebra action,
//! invariant integrals, and two-variable invariant kernels.

pub mod action;
pub mod coeff;
pub mod disc;
pub mod error;
pub mod integral;
pub mod json;
pub mod kernel;
pub mod linalg;
pub mod pbw;
pub mod qseries;
pub mod sample;
pub mod scalar;
pub mod space;
pub mod suite;
pub mod tensor;
pub mod word;

pub use error::{Error, Result};
pub use scalar::Scalar;
