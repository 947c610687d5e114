use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MrsError {
    #[error("invalid cyclic factor {0}: factors must be at least 2")]
    InvalidFactor(u64),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("element list is not a subgroup")]
    NotASubgroup,
    #[error("index out of range: {0}")]
    IndexError(String),
    #[error("operation not available in this entry mode: {0}")]
    ModeError(String),
    #[error("shape mismatch: {0}")]
    ShapeError(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid omega set: {0}")]
    InvalidOmega(String),
    #[error("direct summand is not in the class of groups with zero or several involutions")]
    PhiNotInUpsilon,
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("no such object: {0}")]
    NoSuchObject(String),
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("construction failed verification: {0}")]
    ConstructionFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, MrsError>;
