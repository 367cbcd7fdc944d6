use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("degree {0} lies outside the window and cannot be recovered from periodicity")]
    OutOfWindow(i64),
    #[error("windows differ: [{0},{1}] vs [{2},{3}]")]
    WindowMismatch(i64, i64, i64, i64),
    #[error("enumeration bound exceeded: {0}")]
    Bound(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("degenerate form: {0}")]
    Degenerate(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
