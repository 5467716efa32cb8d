use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("duplicate frame {frame} in period {period}")]
    DuplicateFrame { period: u8, frame: u32 },
    #[error("cannot determine playing direction in period {period}: {reason}")]
    Orientation { period: u8, reason: String },
    #[error("kick-off not found in period {0}")]
    KickoffNotFound(u8),
    #[error("filter error: {0}")]
    Filter(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("scoring error: missing feature {0}")]
    MissingFeature(&'static str),
    #[error("generation error: {0}")]
    Generation(String),
    #[error("report error: {0}")]
    Report(String),
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
