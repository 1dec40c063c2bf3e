//! CLI errors carry whether they are usage errors (exit code 2) or runtime
//! failures (exit code 1).

use std::fmt;

#[derive(Debug)]
pub struct CliError {
    pub usage: bool,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { usage: true, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError { usage: false, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<gstsp::Error> for CliError {
    fn from(e: gstsp::Error) -> Self {
        CliError::runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
