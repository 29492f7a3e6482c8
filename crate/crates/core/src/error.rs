use thiserror::Error;

/// Errors produced by the erasure toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} exceeds the supported size ({actual} > {limit})")]
    GuardExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("positivity violated: minimum eigenvalue {0:e}")]
    Positivity(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors raised by size guards or numerical diagnostics rather
    /// than by malformed input.
    pub fn is_numeric_guard(&self) -> bool {
        matches!(
            self,
            Error::GuardExceeded { .. } | Error::Positivity(_) | Error::Numerical(_)
        )
    }
}
