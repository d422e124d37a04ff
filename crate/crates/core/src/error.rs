use nalgebra::DMatrix;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {what} (expected {expected}, got {got})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A conditional covariance stayed singular after ridge regularization.
    #[error(
        "numerical degeneracy: conditional covariance has minimum eigenvalue {min_eigenvalue:e}"
    )]
    NumericalDegeneracy {
        min_eigenvalue: f64,
        minor: DMatrix<f64>,
    },

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Short machine-readable tag used by the command-line front end.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NumericalDegeneracy { .. } => "numerical-degeneracy",
            Error::UnsupportedSize(_) => "unsupported-size",
            Error::Config(_) => "config",
        }
    }
}
