//! Error type shared by every numerical routine.

use thiserror::Error;

/// Failure modes of the library. The CLI maps each variant onto an exit code.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Request exceeds what the implementation supports (level caps, dimension guards).
    #[error("capability error: {0}")]
    Capability(String),
    /// Iteration failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Two routes that must agree did not.
    #[error("consistency error: {0}")]
    Consistency(String),
    /// A tolerance could not be met within the work budget.
    #[error("accuracy error: {message} (achieved {achieved:e})")]
    Accuracy { message: String, achieved: f64 },
    /// Angular-momentum window too small for the requested cutoff.
    #[error("window error: {0}")]
    Window(String),
    /// Least-squares fit rejected.
    #[error("fit error: {0}")]
    Fit(String),
    /// Malformed input data (JSON documents, specifications).
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
