use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid joint distribution: {0}")]
    InvalidJoint(String),

    #[error("hypergraph mismatch: {0}")]
    HypergraphMismatch(String),

    #[error("box is not consistent: {0}")]
    Inconsistent(String),

    #[error("box is not an xor-box: {0}")]
    NotXor(String),

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),

    #[error("group order exceeds cap {cap}")]
    GroupCapExceeded { cap: usize },

    #[error("{what} of size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    #[error("box is not isotropic for the given group (deviation {0:e})")]
    NotIsotropic(f64),

    #[error("hypotheses not met: {0}")]
    HypothesesUnmet(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("empty observable subset")]
    EmptySubset,

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
