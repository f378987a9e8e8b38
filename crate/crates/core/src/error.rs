use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input is outside the supported parameter range.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical process failed (non-convergence, singular matrix,
    /// vanishing denominator).
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Matrix/vector shapes do not agree.
    #[error("shape mismatch: {0}")]
    Shape(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
