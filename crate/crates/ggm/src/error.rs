use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GgmError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no builtin assumption {0} (expected 1-5)")]
    UnknownBuiltin(usize),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}
