use std::io;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const IO: i32 = 1;
    pub const SCHEMA: i32 = 2;
    pub const OVERFLOW: i32 = 3;
    pub const MAP: i32 = 4;
    pub const VERIFICATION: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("problem file: {0}")]
    Schema(String),

    #[error(transparent)]
    Solver(#[from] rhsolve::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> Self {
        CliError::Schema(msg.into())
    }

    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use rhsolve::Error as E;
        match self {
            CliError::Schema(_) => exit::SCHEMA,
            CliError::Io { .. } => exit::IO,
            CliError::Solver(e) => match e {
                E::Overflow { .. } => exit::OVERFLOW,
                E::NonConvergence { .. } => exit::MAP,
                _ => exit::SCHEMA,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
