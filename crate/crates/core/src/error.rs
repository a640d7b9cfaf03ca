use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} {value} out of range [{min}, {max}]")]
    Range {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid {what}: {reason}")]
    Validation { what: &'static str, reason: String },

    #[error("grid of {points} points under-resolves a basis of dimension {dimension}")]
    UnderResolved { points: usize, dimension: usize },

    #[error("state is not a field ⊗ polarization product; use the direct distribution route")]
    NotProductState,

    #[error("{path}: {message}")]
    Spec { path: String, message: String },
}

impl Error {
    pub(crate) fn validation(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn spec(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            path: path.into(),
            message: message.into(),
        }
    }
}
