use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("spectral intervals are not ordered: {0}")]
    GapGeometry(String),

    #[error("spectral gap vanishes: a1 = a2 = {0}")]
    VanishingGap(f64),

    #[error("eigenvalue {value} lies inside the gap (|lambda| < {gap})")]
    SpectrumViolation { value: f64, gap: f64 },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    Convergence { sweeps: usize, off_norm: f64 },

    #[error("eigenvalue {value} is too close to the split point mu = {mu}")]
    GapViolation { value: f64, mu: f64 },

    #[error("curve never stays below epsilon = {epsilon:e} on k = 0..{len}")]
    ThresholdNotReached { epsilon: f64, len: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("quadrature did not reach tolerance {tol:e} (estimate {est_error:e} after {evaluations} evaluations)")]
    Quadrature {
        tol: f64,
        est_error: f64,
        evaluations: usize,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::Quadrature { .. } | Error::ThresholdNotReached { .. }
        )
    }
}
