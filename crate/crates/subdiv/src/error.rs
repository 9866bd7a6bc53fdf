//! Error types shared by the library and the CLI.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A sequence is too short for the requested stencil or operator.
    #[error("{what}: need at least {needed} values, got {got}")]
    TooShort {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    /// The curve ran out of data while iterating refinement under Shrink.
    #[error("curve exhausted at level {level}: {got} values left, need {needed}")]
    Exhausted {
        level: u32,
        needed: usize,
        got: usize,
    },

    /// A boundary policy cannot be applied to this input.
    #[error("boundary policy error: {0}")]
    Policy(String),

    /// A ratio with vanishing denominator was requested.
    #[error("undefined ratio: {0}")]
    UndefinedRatio(&'static str),

    /// A non-finite value entered a computation that requires finite input.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// Input file could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Bad run configuration (unknown names, inconsistent options).
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 config, 3 parse, 4 insufficient
    /// data, 5 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Parse { .. } | Error::NonFinite(_) => 3,
            Error::TooShort { .. } | Error::Exhausted { .. } | Error::Policy(_) => 4,
            Error::UndefinedRatio(_) | Error::Io(_) => 5,
        }
    }
}
