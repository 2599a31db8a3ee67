use thiserror::Error;

use crate::partition::Partition;

/// Errors raised by the algebra, enumeration, witness and oracle layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid rank profile {profile:?}: {reason}")]
    InvalidRankProfile { profile: Vec<usize>, reason: String },

    #[error("element is not invertible (zero constant term)")]
    NotInvertible,

    #[error("coefficient sequence for {entry} has length {len}, exceeding n = {n}")]
    InvalidDegree { entry: char, len: usize, n: usize },

    #[error("unknown case identifier `{0}`")]
    UnknownCase(String),

    #[error("field {0} is not supported by this operation")]
    UnsupportedField(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no witness found for {partition} after {} recipe attempts", attempted.len())]
    WitnessNotFound {
        partition: Partition,
        attempted: Vec<String>,
    },

    #[error("search space of {candidates} candidates exceeds the budget of {budget}; use sampling")]
    BudgetExceeded { candidates: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
