use thiserror::Error;

/// Errors raised by the algebraic, state and dynamics layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("particle count mismatch: {0} vs {1}")]
    ParticleMismatch(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("repeated index {0} in tuple")]
    RepeatedIndex(usize),
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },
    #[error("observable is not in the image of the level-{k} embedding into {n} particles")]
    NotInImage { k: usize, n: usize },
    #[error("level {level} out of range (bound {bound})")]
    LevelOutOfRange { level: usize, bound: usize },
    #[error("state hierarchy has no level {0}")]
    MissingLevel(usize),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("empty configuration")]
    EmptyConfiguration,
    #[error("non-finite value encountered at step {0}")]
    NonFinite(usize),
    #[error("missing time point t = {0}")]
    MissingTime(f64),
    #[error("resource cap: {0}")]
    ResourceCap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
