use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed lift: {0}")]
    InvalidLift(String),
    #[error("malformed action: {0}")]
    InvalidAction(String),
    #[error("no {k}-fold lift exists (need k = 1 or 5 mod 6)")]
    NoLiftExists { k: i64 },
    #[error("invalid triangle order k = {k} (need k >= 7 and k = 1 or 5 mod 6)")]
    InvalidK { k: i64 },
    #[error("unsupported target rotation triple {0}")]
    UnsupportedTriple(String),
    #[error("rotation triple is not exact: {0}")]
    NonExactTriple(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certificate failure in clause `{clause}`: {detail}")]
    CertificateFailure { clause: String, detail: String },
    #[error("inequality `{clause}` fails at x = {witness}")]
    InequalityFailure { clause: String, witness: String },
    #[error("normalization failure: {0}")]
    NormalizationFailure(String),
    #[error("theta is not well defined: {0}")]
    WellDefinednessFailure(String),
    #[error("theta is not strictly increasing: {0}")]
    MonotonicityFailure(String),
    #[error("orbit too sparse: {0}")]
    DensityFailure(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
