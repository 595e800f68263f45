use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point ({0}, {1}) is not strictly inside the domain")]
    PointOutsideDomain(f64, f64),
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("singular matrix (det = {0})")]
    SingularMatrix(f64),
    #[error("domain is not polygonal")]
    NotPolygonal,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("bad arity: {0}")]
    BadArity(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("evaluation budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("empty profile")]
    EmptyProfile,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
