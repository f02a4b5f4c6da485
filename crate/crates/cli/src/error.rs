use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    /// A required input is missing or a user-supplied value is invalid.
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Sim(#[from] abspm_core::sim::SimError),
    #[error(transparent)]
    Convert(#[from] abspm_core::log::ConvertError),
    #[error(transparent)]
    Discovery(#[from] abspm_core::discovery::DiscoveryError),
    #[error(transparent)]
    Assessment(#[from] abspm_core::assessment::AssessmentError),
    #[error("{0}")]
    Internal(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// 2 for precondition failures (bad input, missing artifacts), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precondition(_)
            | Error::Parse { .. }
            | Error::Assessment(_)
            | Error::Discovery(abspm_core::discovery::DiscoveryError::InvalidAbstraction(_)) => 2,
            Error::Sim(abspm_core::sim::SimError::InvalidConfig(_)) => 2,
            _ => 1,
        }
    }
}
