use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A syntax error in one of the text formats, with a 1-based location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unbound letter `{0}`")]
    UnboundLetter(String),

    #[error("not a commutative kei: {0}")]
    NotCommutative(String),

    #[error("triple partition failed: {0}")]
    TriplePartition(String),

    #[error("presentation did not finish within budget")]
    Diverged,

    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("target rejected: {0}")]
    TargetRejected(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
