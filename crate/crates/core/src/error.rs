use thiserror::Error;

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("mock modulus {0} is not a prime >= 101")]
    InvalidModulus(u64),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("length mismatch: {left} bases vs {right} exponents")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty operand list")]
    Empty,
}

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("input truncated")]
    Truncated,
    #[error("trailing bytes after encoding")]
    TrailingBytes,
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown backend tag {0:#04x}")]
    UnknownBackend(u8),
    #[error("backend of encoded object does not match the public parameters")]
    BackendMismatch,
    #[error("expected {expected} bytes, found {found}")]
    BadLength { expected: usize, found: usize },
    #[error("value out of range")]
    OutOfRange,
    #[error("invalid group element encoding")]
    InvalidElement,
    #[error("wrong object kind: expected {expected}, found {found}")]
    WrongKind { expected: char, found: char },
    #[error("element count does not match the declared depth")]
    BadElementCount,
}

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("maximum depth must be at least 1")]
    ZeroDepth,
    #[error("maximum depth {0} does not fit the 16-bit depth field")]
    DepthTooLarge(usize),
    #[error("identity depth {depth} exceeds the maximum depth {max}")]
    DepthExceeded { depth: usize, max: usize },
    #[error("identity component {index} is zero")]
    ZeroComponent { index: usize },
    #[error("delegation must extend the identity by exactly one level ({from} -> {to})")]
    NotOneStepExtension { from: usize, to: usize },
    #[error("the key's identity is not a prefix of the target identity")]
    NotPrefix,
    #[error("key or ciphertext does not match the public parameters")]
    Malformed,
    #[error("randomness does not match the key layout")]
    RandomnessShape,
    #[error(transparent)]
    Backend(#[from] BackendError),
}
