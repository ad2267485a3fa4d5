use std::io;
use std::path::PathBuf;

use capakb::reasoner::ReasonerError;
use thiserror::Error;

/// Process exit codes. Stable: scripts depend on them.
pub mod exit {
    pub const OK: u8 = 0;
    /// Parse or validation errors, unknown terms, bad usage.
    pub const ERROR: u8 = 1;
    pub const IO: u8 = 2;
    pub const ITERATION_CAP: u8 = 3;
    /// `query ask` on a fact that is not in the closure.
    pub const ABSENT: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
    #[error("{0} error(s) in the input")]
    Diagnostics(usize),
    #[error("unknown term {0}")]
    UnknownTerm(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    IterationCap(ReasonerError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Output(_) => exit::IO,
            CliError::IterationCap(_) => exit::ITERATION_CAP,
            CliError::Diagnostics(_) | CliError::UnknownTerm(_) | CliError::Invalid(_) => exit::ERROR,
        }
    }
}
