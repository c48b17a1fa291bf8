//! Command-line experiments for asymlab: config-driven runs and sweeps,
//! CSV/JSON/gnuplot output, and seeded verification suites.

pub mod config;
pub mod runner;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Resource(asymlab::Error),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error(transparent)]
    Core(asymlab::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<asymlab::Error> for CliError {
    fn from(e: asymlab::Error) -> Self {
        match e {
            asymlab::Error::Resource { .. } => CliError::Resource(e),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    /// 2 for bad input, 3 for an exceeded cap, 4 for a failed invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::Core(e) => match e {
                asymlab::Error::Validation(_) => 4,
                asymlab::Error::Io(_) => 1,
                _ => 2,
            },
            CliError::Io(_) => 1,
        }
    }
}
