use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad scenario, scheme parameters, flags or input values.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    /// A simulation result broke one of its own invariants.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit status: 2 configuration, 3 input/output, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Io { .. } | Error::Format { .. } => 3,
            Error::Internal(_) => 4,
        }
    }
}

impl From<deferral_core::ConfigError> for Error {
    fn from(e: deferral_core::ConfigError) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<deferral_core::simulation::SimError> for Error {
    fn from(e: deferral_core::simulation::SimError) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<deferral_core::ecology::EcologyError> for Error {
    fn from(e: deferral_core::ecology::EcologyError) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<deferral_core::synthetic::ProfileError> for Error {
    fn from(e: deferral_core::synthetic::ProfileError) -> Self {
        Error::Config(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
