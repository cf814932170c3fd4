use thiserror::Error;

use crate::formula::Var;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable x{var} out of range for {n} variables")]
    VarOutOfRange { var: u32, n: usize },

    #[error("assignment has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("refinement sets x{} which is already fixed", .0.get())]
    RefinementConflict(Var),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid mask: {0}")]
    InvalidMask(String),

    #[error("{n} variables exceed the enumeration cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("input exceeds budget: {0}")]
    Budget(String),

    #[error("malformed proof: {0}")]
    MalformedProof(String),

    #[error("cutting-planes rule error: {0}")]
    Rule(String),

    #[error("invalid parameters: {0}")]
    Params(String),
}
