use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("an edge joins a source vertex to a sink vertex")]
    PreconditionEdge,
    #[error("terminal vertices {0} and {1} are adjacent")]
    PreconditionIndependence(usize, usize),
    #[error("{what}: size {size} exceeds enumeration limit {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("no balanced set found after {attempts} attempts")]
    RetriesExhausted { attempts: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
