use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed arguments that violate an operation's contract.
    #[error("usage error: {0}")]
    Usage(String),

    /// A formal series operation was applied outside its domain
    /// (for example the logarithm of a series whose constant term is not 1).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A request exceeds what a module is willing to compute.
    #[error("capacity exceeded in {module}: {detail}")]
    Capacity { module: &'static str, detail: String },

    /// Numeric evaluation requested outside |q| < 1/e.
    #[error("q = {q} lies outside the proven domain |q| < 1/e")]
    Domain { q: f64 },

    #[error("cache integrity error in {path}: {reason}")]
    CacheIntegrity { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
