use thiserror::Error;

use crate::mosaic::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid board: {0}")]
    InvalidBoard(String),
    #[error("cell {0} is not on the board")]
    OffBoard(String),
    #[error("invalid tile: {0}")]
    InvalidTile(String),
    #[error("no crossing between strands {0} and {1} on this tile")]
    NoSuchCrossing(usize, usize),
    #[error("smoothing choice {choice} at strands {a}/{b} leaves a non-minimal tile")]
    NonMinimalSmoothing { a: usize, b: usize, choice: u8 },
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseAt {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mosaic is not valid: {} violation(s)", .0.len())]
    Invalid(Vec<Violation>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("complement has no component {0}")]
    NoSuchComponent(usize),
    #[error("precondition failed at {stage}: {reason}")]
    PreconditionFailed { stage: String, reason: String },
    #[error("postcondition violated at {stage}: {reason}")]
    PostconditionViolated { stage: String, reason: String },
    #[error("search request too large: {0}")]
    TooLarge(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn precondition(stage: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::PreconditionFailed {
            stage: stage.into(),
            reason: reason.into(),
        }
    }
}

impl Error {
    pub(crate) fn postcondition(stage: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::PostconditionViolated {
            stage: stage.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
