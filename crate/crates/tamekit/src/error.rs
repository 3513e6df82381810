use thiserror::Error;

/// How an error should be classified by callers that must pick an exit path:
/// bad inputs/preconditions versus a violated internal consistency check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Precondition,
    InternalConsistency,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular or numerically rank-deficient")]
    SingularMatrix,

    #[error("invalid point for ambient space: {0}")]
    InvalidPoint(String),

    #[error("point set is not discrete at working precision: {0}")]
    NotDiscrete(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no separating linear functional found after {attempts} attempts")]
    NoSeparatingFunctional { attempts: usize },

    #[error("integer overflow in exact matrix arithmetic; rerun in rational mode")]
    ExactOverflow,

    #[error("non-finite value in float arithmetic: {0}")]
    NonFinite(String),

    #[error("integrality certificate failed: {0}")]
    IntegralityFailure(String),

    #[error("internal consistency check failed: {0}")]
    InternalCheck(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Classify for exit-code mapping: internal-consistency failures are the
    /// "math went wrong" class, everything else is a usage/precondition error.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InternalCheck(_) | Error::IntegralityFailure(_) => {
                ErrorClass::InternalConsistency
            }
            _ => ErrorClass::Precondition,
        }
    }

    /// Short machine-readable tag for reports and CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::SingularMatrix => "singular_matrix",
            Error::InvalidPoint(_) => "invalid_point",
            Error::NotDiscrete(_) => "not_discrete",
            Error::Precondition(_) => "precondition",
            Error::NoSeparatingFunctional { .. } => "no_separating_functional",
            Error::ExactOverflow => "exact_overflow",
            Error::NonFinite(_) => "non_finite",
            Error::IntegralityFailure(_) => "integrality_failure",
            Error::InternalCheck(_) => "internal_consistency",
            Error::Unsupported(_) => "unsupported",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
