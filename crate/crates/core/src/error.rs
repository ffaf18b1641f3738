use thiserror::Error;

/// Errors produced by the series, exact and grid routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("{method} does not support the {equation} equation")]
    UnsupportedEquation {
        method: &'static str,
        equation: &'static str,
    },

    #[error("split-step solver diverged at step {step}")]
    Divergence { step: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
