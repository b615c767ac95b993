use thiserror::Error;

/// Every fallible operation in the engine reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("denominator vanishes at s = {point}")]
    PoleAtPoint { point: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("presentation {0} is not tagged Kac")]
    NotKacTagged(String),
    #[error("word basis of {needed} exceeds the budget of {budget}")]
    SpanTooLarge { budget: usize, needed: usize },
    #[error("inconsistent elimination: {0}")]
    InconsistentElimination(String),
    #[error("substitution is not star-consistent: {0}")]
    InconsistentSubstitution(String),
    #[error("unsupported size {0}")]
    UnsupportedSize(usize),
    #[error("unsupported algebra spec: {0}")]
    UnsupportedSpec(String),
    #[error("block mismatch: {0}")]
    BlockMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("counit does not annihilate relation {0}")]
    CounitViolation(String),
    #[error("invalid spectral triple: {0}")]
    InvalidTriple(String),
    #[error("unknown name {0}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
