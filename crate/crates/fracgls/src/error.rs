//! Crate-wide error type.

/// Errors surfaced by the numerical engines and norm computations.
///
/// Infinite norms are *not* errors: they are reported as ordinary results
/// with an infinite value (see [`crate::norms::NormResult`]).
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow evaluating {0}")]
    Overflow(String),

    #[error(
        "integral did not converge: {reason} (partial={partial:.6e}, \
         error={error_estimate:.3e}, {evaluations} evaluations)"
    )]
    NoConvergence {
        reason: String,
        partial: f64,
        error_estimate: f64,
        evaluations: u64,
    },

    #[error("non-finite integrand value at {0}")]
    NonFinite(String),

    #[error("decay detection failed: {0}")]
    DecayDetection(String),

    #[error("unsupported dimension n={0}")]
    UnsupportedDimension(u32),

    #[error("empty grid: {0}")]
    EmptyGrid(String),

    #[error("support violation: {0}")]
    Support(String),
}

pub type Result<T> = std::result::Result<T, Error>;
