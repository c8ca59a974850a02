use std::io;

use thiserror::Error;

/// Errors produced by the numerical routines, the estimators and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure did not reach its target accuracy.
    /// `best` carries the last value computed before giving up.
    #[error("numerical failure: {message} (best value {best})")]
    Numerical { message: String, best: f64 },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>, best: f64) -> Self {
        Error::Numerical {
            message: msg.into(),
            best,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
