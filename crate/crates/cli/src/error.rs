use std::path::PathBuf;

use thiserror::Error;

/// Failure of a CLI command, carrying the process exit status it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(#[source] caputo_sirs::Error),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Output { .. } => 4,
        }
    }
}

impl From<caputo_sirs::Error> for CliError {
    fn from(e: caputo_sirs::Error) -> Self {
        use caputo_sirs::Error as E;
        match e {
            E::InvalidParameter { .. } | E::Config(_) | E::Precondition(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numeric(e),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
