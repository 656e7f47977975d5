use std::path::PathBuf;

use cssqkd_core::{
    exponent::ExponentError, keyrate::KeyRateError, protocol::ProtocolError,
    security_bound::BoundError, types::TypesError, DecoderError, Gf2Error,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    CodeFile { path: PathBuf, source: Gf2Error },
    #[error("{path}:{line}: {msg}")]
    Batch { path: PathBuf, line: usize, msg: String },
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    KeyRate(#[from] KeyRateError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Decoder(#[from] DecoderError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Types(#[from] TypesError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
