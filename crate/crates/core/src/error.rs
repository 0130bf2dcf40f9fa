use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^62")]
    InvalidModulus(u64),
    #[error("residues belong to different moduli ({0} and {1})")]
    ModulusMismatch(u64, u64),
    #[error("0 has no multiplicative inverse")]
    ZeroInverse,
    #[error("c = {c} is not a unit in [1, {}]", p - 1)]
    InvalidConstant { c: i64, p: u64 },
    #[error("{0}")]
    OutOfRange(String),
    #[error("family gap {left} -> {right} is shorter than H = {h}")]
    SpacingViolation { left: u64, right: u64, h: u64 },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn out_of_range(msg: impl Into<String>) -> Error {
    Error::OutOfRange(msg.into())
}
