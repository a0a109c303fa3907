//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by estimation, testing and simulation routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A distribution or configuration parameter is outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An evaluation point lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The sample cannot support the requested computation.
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// A cached critical-value table does not match the requested metadata.
    #[error("calibration cache miss: {0}")]
    CacheMiss(String),

    /// Malformed textual input (spec strings, table files, configs).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
