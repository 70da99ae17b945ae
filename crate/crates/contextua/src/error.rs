use thiserror::Error;

/// Crate-wide error type.
///
/// `Parse` covers malformed scalar text and malformed input files; everything
/// else is a domain error (dimension mismatches, violated invariants, unknown
/// names).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("vectors are linearly dependent")]
    DependentBasis,
    #[error("zero vector does not span a ray")]
    ZeroVector,
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("{0}")]
    Domain(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// True for errors caused by unreadable input rather than violated
    /// domain rules.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
