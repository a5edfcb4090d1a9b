//! Command-line front end and experiment harness.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::fmt;

pub mod commands;
pub mod config;
pub mod emit;
pub mod harness;

pub use commands::{run, Cli};

/// Errors classified for exit codes: usage mistakes exit 1, data
/// problems exit 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Data(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<nfzwda::Error> for CliError {
    fn from(e: nfzwda::Error) -> Self {
        match e {
            nfzwda::Error::InvalidScheme(_) | nfzwda::Error::InvalidParameter(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Data(other.to_string()),
        }
    }
}
