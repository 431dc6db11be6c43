use alloc::string::String;

use crate::lp::LpStatus;

/// Errors raised by constructors, scores, the LP layer and the evaluation harness.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry ({row}, {col}) = {value} lies outside [0, 1]")]
    EntryOutOfRange { row: usize, col: usize, value: f64 },

    #[error("column {col} sums to {sum}, not 1")]
    ColumnSumError { col: usize, sum: f64 },

    #[error("privacy level {0} is outside the permitted range")]
    AlphaOutOfRange(f64),

    #[error("score is undefined for a group of size 0")]
    UndefinedForN0,

    #[error("invalid objective: {0}")]
    InvalidObjective(&'static str),

    #[error("the max aggregator cannot be expressed as a linear objective")]
    UnsupportedObjective,

    #[error("input {input} is outside [0, {n}]")]
    InputOutOfRange { input: usize, n: usize },

    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),

    #[error("invalid group size {0}")]
    InvalidGroupSize(usize),

    #[error("repetition count must be at least 1")]
    NoRepetitions,

    #[error("invalid bounds [{lo}, {hi}] on variable {var}")]
    InvalidBounds { var: usize, lo: f64, hi: f64 },

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("simplex stalled: pivot magnitude below threshold or iteration limit reached")]
    NumericalInstability,

    #[error("solver returned {0:?} on a problem that always has an optimum")]
    Solver(LpStatus),

    #[error("designed mechanism failed verification: {0}")]
    Verification(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
