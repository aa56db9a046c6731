use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative value {value} at row {row}, column {col}")]
    NegativeValue { row: usize, col: usize, value: f64 },

    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },

    #[error("column {name:?} has no positive entries (zero mean)")]
    ZeroColumn { name: String },

    #[error("need more rows than columns: n = {n}, d = {d}")]
    TooFewRows { n: usize, d: usize },

    #[error("weight at row {row} must be positive and finite, got {value}")]
    NonpositiveWeight { row: usize, value: f64 },

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("row index {index} out of range for {len} rows")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("rows {a} and {b} carry different weights")]
    UnequalWeights { a: usize, b: usize },

    #[error("row {from} is not attribute-wise richer than row {to}")]
    NotRicher { from: usize, to: usize },

    #[error("transfer leaves donor attribute {col} negative")]
    NegativeResult { col: usize },

    #[error("invalid transfer: {0}")]
    InvalidTransfer(String),

    #[error("{family} copula does not support dimension {dim}")]
    UnsupportedDimension { family: &'static str, dim: usize },

    #[error("parameter {value} outside the domain of the {family} family")]
    ParameterOutOfDomain { family: &'static str, value: f64 },

    #[error("spearman rho {rho} is not attainable by the {family} family")]
    Unattainable { family: &'static str, rho: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("missing column {name:?}")]
    MissingColumn { name: String },

    #[error("parse error at row {row}: {msg}")]
    ParseError { row: usize, msg: String },

    #[error("empty result: {0}")]
    EmptyResult(String),

    #[error("config error: {0}")]
    ConfigError(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
