use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a strong divisibility sequence: {0}")]
    NotStrongDivisibility(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unknown identifier `{name}`; valid: {valid}")]
    Unknown { name: String, valid: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
