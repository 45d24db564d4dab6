use thiserror::Error;

/// Errors raised by model construction, the solvers and the oracles.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dominance relation has a cycle through product {0}")]
    Cycle(usize),

    #[error("product index {index} out of range for {n} products")]
    IdOutOfRange { index: usize, n: usize },

    #[error("{what} must be strictly positive, got {value}")]
    NonPositiveInput { what: &'static str, value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{n} elements exceeds the enumeration limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("transitive reduction is not a forest (product {0} has several parents)")]
    NotATree(usize),

    #[error("dominance relation is not attractiveness-correlated")]
    NotAttractivenessCorrelated,

    #[error("shadow weight of product {0} exceeds its attractiveness")]
    WeightOrder(usize),

    #[error("Lambert W is only defined here for x >= 0, got {0}")]
    NegativeArgument(f64),

    #[error("pricing requires a strictly positive outside option")]
    ZeroOutsideOption,

    #[error("boundary group sizes k1={k1}, k2={k2} are invalid for k={k}")]
    BadGroupSizes { k: usize, k1: usize, k2: usize },

    #[error("no boundary candidate is feasible for k={0}")]
    NoFeasibleCandidate(usize),

    #[error("flow network has no feasible flow")]
    InfeasibleNetwork,

    #[error("capacitated problem with {0} products has no exact polynomial method and is too large to enumerate")]
    ProblemTooLarge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
