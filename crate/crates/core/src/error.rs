use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("argument outside the function's domain: {0}")]
    MathDomain(String),

    #[error("root search failed: {0}")]
    Search(String),

    #[error("no eigenvalue found: {0}")]
    NoEigenvalue(String),

    #[error("eigen backend failure: {0}")]
    Backend(String),

    #[error("point outside the extension margin: {0}")]
    OutOfRange(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("degenerate critical point: {0}")]
    Degenerate(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures that happen inside the numerical pipeline
    /// (as opposed to bad input or configuration).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Search(_)
                | Error::NoEigenvalue(_)
                | Error::Backend(_)
                | Error::OutOfRange(_)
                | Error::Consistency(_)
                | Error::Resolution(_)
                | Error::Degenerate(_)
                | Error::Unsupported(_)
                | Error::UnsupportedDomain(_)
        )
    }
}
