use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {p}^{r} exceeds the supported cap of 2^20")]
    FieldTooLarge { p: u64, r: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("inverse of zero")]
    InverseOfZero,
    #[error("element index {index} out of range for GF({q})")]
    ElementOutOfRange { index: u32, q: u32 },
    #[error("plane over GF({0}) is too large to materialize")]
    PlaneTooLarge(u32),
    #[error("point id {id} out of range ({len} points)")]
    PointOutOfRange { id: usize, len: usize },
    #[error("the two points coincide")]
    SamePoint,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("node budget of {budget} exhausted after {nodes} nodes")]
    BudgetExceeded { budget: u64, nodes: u64 },
    #[error("no acceptable draw in {0} attempts")]
    AttemptsExhausted(u32),
    #[error("formula does not divide evenly: {0}")]
    NonIntegral(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
