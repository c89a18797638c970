use thiserror::Error;

/// Errors produced by the numerical and data-processing routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative or quadrature routine did not reach its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Input data cannot support the requested computation.
    #[error("data error: {0}")]
    Data(String),

    /// All samples are identical, so no spread-dependent fit exists.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("csv error at line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
