use thiserror::Error;

/// Errors raised across the solver, list builders, exact oracles and generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GbsmError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid partial solution: {0}")]
    InvalidPartial(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("element set {0:?} cannot be attached to any single bin")]
    InfeasibleSet(Vec<usize>),

    #[error("every bin and assignment cost is zero")]
    AllCostsZero,

    #[error("enumeration too large: {what} = {size} exceeds guard {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("no candidate set with positive marginal cost fits the budget")]
    NoCandidate,

    #[error("no feasible instance after {0} resampling attempts")]
    Unsatisfiable(usize),
}

pub type Result<T> = std::result::Result<T, GbsmError>;
