use thiserror::Error;

/// Errors raised by the numerical routines and their front ends.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular to working precision (pivot {pivot:.3e} below threshold {threshold:.3e})")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("matrix is not Hermitian (skew part {skew:.3e})")]
    NotHermitian { skew: f64 },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("not a strict contraction with margin {margin:e}: largest singular value is {sigma1}")]
    NotContractive { sigma1: f64, margin: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
