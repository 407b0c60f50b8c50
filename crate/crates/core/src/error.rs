use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty affine hull")]
    EmptyHull,
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("subspace is not linear")]
    NotLinear,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero root")]
    ZeroRoot,
    #[error("lemma applies to hyperbolic w only")]
    NotHyperbolic,
    #[error("invalid Coxeter type: {0}")]
    InvalidType(String),
    #[error("a Coxeter element choice is only meaningful for type A~n")]
    ChoiceNotAllowed,
    #[error("invalid Coxeter element choice: {0}")]
    InvalidChoice(String),
    #[error("invalid removal node {0}")]
    InvalidRemoval(usize),
    #[error("w not generated")]
    NotGenerated,
    #[error("poset too large for this operation ({0} elements)")]
    TooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
