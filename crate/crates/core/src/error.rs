use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid experiment or walk configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Caller passed arguments that do not fit together (e.g. dimension mismatch).
    #[error("usage error: {0}")]
    Usage(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A numerical procedure did not reach its tolerance.
    #[error("numeric error in {what}: residual {residual:e} above tolerance {tolerance:e}")]
    Numeric {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    /// Extrapolation in the truncation radius did not settle.
    #[error("extrapolation spread too large: brackets {lower} and {upper}")]
    Extrapolation { lower: f64, upper: f64 },

    /// Escape constants requested for a recurrent dimension.
    #[error("the walk is recurrent in d = {0}; escape probability is zero")]
    Recurrent(usize),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("memory policy: {0}")]
    MemoryPolicy(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
