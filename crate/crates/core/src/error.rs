//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a documented precondition or type invariant.
    #[error("{0}")]
    Domain(String),

    /// A computation failed numerically (singular denominator, non-finite value).
    #[error("numerical failure at {frequency_hz:.6e} Hz: {message}")]
    Numerical { frequency_hz: f64, message: String },

    /// An input document could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A material name was not found in the active catalog.
    #[error("unknown material {name:?}; catalog has: {available}")]
    UnknownMaterial { name: String, available: String },

    /// A physical-consistency gate (passivity or reciprocity) failed.
    #[error("consistency check failed: {0}")]
    CheckFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub fn numerical(frequency_hz: f64, message: impl Into<String>) -> Self {
        Error::Numerical {
            frequency_hz,
            message: message.into(),
        }
    }
}
