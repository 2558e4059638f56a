//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("inconclusive at this truncation: {0}")]
    Inconclusive(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid series spec: {0}")]
    InvalidSeries(String),
    #[error("homogeneous input required: {0}")]
    NotHomogeneous(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("linear system not solvable: {0}")]
    NotSolvable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl AlgError {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, AlgError::Inconclusive(_))
    }
}
