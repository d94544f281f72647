use thiserror::Error;

use crate::instance::Model;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{field}[{index}] = {value}: weights must be positive integers")]
    ZeroOrNegativeWeight {
        field: &'static str,
        index: usize,
        value: i64,
    },
    #[error("capacity = {0}: capacity must be a positive integer")]
    ZeroCapacity(i64),
    #[error("leader and follower are both empty")]
    EmptyInstance,
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
    #[error("model {found} is not supported here (expected {expected})")]
    WrongModel { expected: &'static str, found: Model },
    #[error("assignment has {found} weights but the instance has {expected} leader items")]
    MissingAssignment { expected: usize, found: usize },
    #[error("assignment[{index}] = {value} is negative")]
    NegativeAssignedWeight { index: usize, value: String },
    #[error("assignment[{index}] is zero; constraint-side efficiency is undefined")]
    ZeroConstraintWeightDivision { index: usize },
    #[error("capacity {capacity} needs {needed_bits} bits of DP storage, budget is {budget_bits}")]
    CapacityTooLarge {
        capacity: i64,
        needed_bits: u128,
        budget_bits: u128,
    },
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("chosen item weight {weight} does not leave a gain in residual capacity {residual}")]
    ChosenItemTooLarge { weight: i64, residual: i64 },
    #[error("oracle limited to {limit} leader items, instance has {leader_items}")]
    InstanceTooLargeForOracle { leader_items: usize, limit: usize },
    #[error("partition numbers sum to {0}, which is odd")]
    OddTotalSum(i64),
    #[error("invalid partition instance: {0}")]
    InvalidPartition(String),
    #[error("M = {m} must exceed 2b = {}", 2 * half_sum)]
    MTooSmall { m: i64, half_sum: i64 },
    #[error("scale = {0} must be at least 2")]
    ScaleTooSmall(i64),
    #[error("gadget prediction {predicted} refuted by oracle value {actual}")]
    GadgetUnconfirmed { predicted: i64, actual: i64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
