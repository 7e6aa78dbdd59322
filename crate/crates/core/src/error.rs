use std::fmt;

use thiserror::Error;

/// Position of a syntax or semantic problem in DSL source text (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: Position,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("partial numerator a_{index} is zero (the continued fraction terminates there)")]
    ZeroPartialNumerator { index: u64 },

    #[error("{kind} part is undefined: denominator b_{index} is zero")]
    ContractionUndefined { kind: Parity, index: u64 },

    #[error("equivalence transform is undefined: b_{index} is zero")]
    TransformUndefined { index: u64 },

    #[error("index {index} is outside the sequence (length {len})")]
    OutOfRange { index: u64, len: u64 },

    #[error("element {index} is not rational; use a big-float backend")]
    NotRational { index: u64 },

    #[error("evaluating index {index}: {message}")]
    Evaluation { index: u64, message: String },

    #[error("wrong form: {0}")]
    WrongForm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
