use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Mismatched algebras, invalid elements, failed preconditions.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("operator undefined on fractional part")]
    OperatorUndefined,

    #[error("word length {len} exceeds the limit of {limit}")]
    WordLength { len: usize, limit: usize },

    /// Rewrite budget exhausted; `trace` holds the last steps taken.
    #[error("rewrite step limit of {limit} exceeded")]
    StepLimit { limit: usize, trace: Vec<String> },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for the resource guards (word length, step count).
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::WordLength { .. } | Error::StepLimit { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
