use std::io;
use std::path::PathBuf;

use ahibe::bench::BenchError;
use ahibe::{BackendError, CodecError, SchemeError};
use ggm_check::GgmError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Ggm(#[from] GgmError),
    #[error("malformed hybrid ciphertext: {0}")]
    Container(&'static str),
    #[error("authentication failed: wrong key or tampered ciphertext")]
    Auth,
}

impl CliError {
    /// 0 success, 2 usage, 3 I/O, 4 crypto-structural, 5 authentication.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Ggm(_) => 2,
            CliError::Bench(BenchError::MockBackend | BenchError::NoRepetitions) => 2,
            CliError::Backend(BackendError::InvalidModulus(_) | BackendError::UnknownCurve(_)) => 2,
            CliError::Io { .. } => 3,
            CliError::Auth => 5,
            _ => 4,
        }
    }
}
