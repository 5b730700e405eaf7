//! Numerical toolkit for fractional Sobolev norms, Grand Lebesgue
//! exponent sweeps, sharp embedding constants, and empirical verification
//! of the associated inequalities on analytic test-function families.

pub mod constants;
pub mod norms;
pub mod error;
pub mod glspaces;
pub mod numerics;
pub mod testfuncs;

pub use error::{Error, Result};
