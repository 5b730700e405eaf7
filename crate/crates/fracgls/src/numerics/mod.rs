//! Special functions and integration engines used by every other module.

mod bessel;
mod gamma;
mod qmc;
mod quad;

pub use bessel::{bessel_j0, bessel_k};
pub use gamma::{gamma, log_gamma, sphere_area};
pub use qmc::integrate_qmc;
pub use quad::{
    integrate_1d, integrate_1d_fn, integrate_halfline, integrate_halfline_with, Endpoint,
    SingularityHint,
};

/// Result of a numerical integration: the estimate, an absolute error
/// estimate, and the number of integrand evaluations spent.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

impl QuadResult {
    /// Combine with another integral (for split domains): values and error
    /// estimates add.
    pub fn merge(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }

    /// Scale the integral by a constant factor.
    pub fn scaled(self, c: f64) -> QuadResult {
        QuadResult {
            value: c * self.value,
            error_estimate: c.abs() * self.error_estimate,
            evaluations: self.evaluations,
        }
    }
}

/// Default relative tolerance for 1D quadrature.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default per-shift point budget for QMC.
pub const DEFAULT_QMC_BUDGET: u64 = 1 << 18;
