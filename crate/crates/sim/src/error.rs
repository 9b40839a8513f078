use std::path::PathBuf;

use polarform_core::PolarError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid `{key}`: {msg}")]
    Config { key: String, msg: String },
    #[error("target rate {target} bps/Hz is outside the range of curve `{curve}`")]
    OutOfRange { curve: String, target: f64 },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] PolarError),
}

impl SimError {
    pub fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        SimError::Config { key: key.into(), msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
