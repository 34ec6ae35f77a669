//! Error type shared by every module of the crate.

/// Errors raised by construction and by the algebraic/numerical operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two values that must live in the same ambient dimension do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A symplectic triple (or a matrix derived from one) violates its
    /// invariants: antisymmetry, positivity, `J^2 = -I`, `g = theta J`,
    /// unimodularity, or invertibility.
    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    /// A scalar or combinatorial argument is outside its documented domain
    /// (negative tolerance, zero `hbar` where a positive one is required,
    /// out-of-range index, oversized truncation order, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input data (JSON elements, structures, grid or state specifications)
    /// failed to parse or violated the wire schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// An iterative estimator failed to reach its tolerance within its
    /// iteration budget, or a damping parameter fell below the conditioning
    /// safeguard. Reported, never silently truncated.
    #[error("did not converge: {0}")]
    NonConvergence(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Helper for the pervasive "same 2n everywhere" checks.
    pub(crate) fn dim(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }
}
