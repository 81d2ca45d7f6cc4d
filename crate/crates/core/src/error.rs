use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported root system type {0}")]
    InvalidType(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Weyl group too large: {size} elements exceeds the limit of {limit}")]
    GroupTooLarge { size: u128, limit: u128 },
    #[error("node {0} is not a simple-root index")]
    InvalidNode(usize),
    #[error("cohomology of G/P is not generated by the divisor class (codegree {codegree}: rank {rank} < {classes} classes)")]
    NotDivisorGenerated {
        codegree: u32,
        rank: usize,
        classes: usize,
    },
    #[error("computation budget exceeded: {what} = {size} > {limit}")]
    BudgetExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("point {point} is outside the alcove: {constraint}")]
    AlcoveViolation { point: usize, constraint: String },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("input matrix is not unitary (drift {0:e})")]
    NonUnitaryInput(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
