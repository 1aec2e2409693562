//! CLI error type with the documented exit-code mapping:
//! parse and IO failures exit 2, precondition and metadata failures exit 3,
//! verification failures exit 1.

use dtcwt_core::CoreError;
use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Input could not be read or parsed (exit 2).
    Parse(String),
    /// A precondition or metadata consistency check failed (exit 3).
    Precondition(String),
    /// The verification suite reported failures (exit 1).
    VerifyFailed(usize),
}

impl CliError {
    pub fn parse(msg: String) -> Self {
        CliError::Parse(msg)
    }

    pub fn precondition(msg: String) -> Self {
        CliError::Precondition(msg)
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::VerifyFailed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) => write!(f, "{msg}"),
            CliError::Precondition(msg) => write!(f, "{msg}"),
            CliError::VerifyFailed(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Precondition(e.to_string())
    }
}
