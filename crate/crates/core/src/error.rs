use std::fmt;

use thiserror::Error;

/// A parse failure tied to a line of an input file (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("rule hex must have 32 digits, found {len} (first bad position {position})")]
    HexLength { len: usize, position: usize },
    #[error("invalid hex digit {found:?} at position {position}")]
    HexDigit { position: usize, found: char },
    #[error("invalid rule list: {}", join(.0))]
    RuleList(Vec<LineError>),
    #[error("invalid domain catalog: {}", join(.0))]
    Catalog(Vec<LineError>),
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: LineError },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join(errors: &[LineError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
