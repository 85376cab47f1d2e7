use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("linear map is not a scaled permutation: {0}")]
    NotScaledPermutation(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("action is not Poisson for this tensor: {0}")]
    NotPoisson(String),

    #[error("group is not closed or invalid: {0}")]
    InvalidGroup(String),

    #[error("invalid fixed-point chart: {0}")]
    InvalidChart(String),

    #[error("induced system is not expressible in the block variables: {0}")]
    NotExpressible(String),

    #[error("non-finite state at t = {t} (last valid time {last_valid_t})")]
    NonFinite { t: f64, last_valid_t: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
