//! Toolkit error type with the CLI exit-code split: configuration and usage
//! problems exit 1, unreadable or malformed data exits 2.

use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad flags, bad config values, invalid parameter combinations.
    #[error("{0}")]
    Config(String),
    /// Unreadable or malformed input data, unwritable outputs.
    #[error("{0}")]
    Data(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Error::Data(format!("{}: {err}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Data(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
