use std::path::PathBuf;

/// Errors raised by the construction and verification routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("alpha out of range (0,2): {0}")]
    AlphaOutOfRange(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "quadrature did not converge on [{lo}, {hi}]: error estimate {estimate:e} exceeds tolerance {tol:e} after {intervals} intervals"
    )]
    NonConvergence {
        lo: f64,
        hi: f64,
        estimate: f64,
        tol: f64,
        intervals: usize,
    },

    #[error("golden-section bracket failure: {0}")]
    Bracket(String),

    #[error("invalid profile description: {0}")]
    Profile(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
