//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by the library operations.
///
/// Mathematical *answers* (an element failing a predicate, a verifier finding
/// a witness) are not errors; they are reported in the operation's result
/// type. Errors signal violated preconditions or malformed inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix has non-constant entries where scalars are required")]
    NotConstant,

    #[error("element is not a Virasoro element")]
    NotVirasoro,

    #[error("matrix {0} is not a nonzero idempotent")]
    NotIdempotent(String),

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("degree {n} exceeds the table cutoff {n_max}")]
    CutoffExceeded { n: u32, n_max: u32 },

    #[error("action is not regular: {0}")]
    NotRegular(String),

    #[error("inconsistent regular-action data: {0}")]
    InconsistentData(String),

    #[error("partition relations violated: {0}")]
    PartitionViolation(String),

    #[error("claim verification failed: {0}")]
    ClaimFailed(String),

    #[error("not a matrix-algebra representation: {0}")]
    NotRepresentation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
