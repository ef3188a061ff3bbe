use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("rank n={0} outside the supported range 2..=8")]
    UnsupportedRank(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("element is not diagonal modulo scalars")]
    NotInTorus,
    #[error("element is not in xi + b (lower deviation {deviation:.3e})")]
    NotInXiPlusB { deviation: f64 },
    #[error("point is outside V: spectrum has real-part gap {gap:.3e}")]
    NotInV { gap: f64 },
    #[error("group element is outside G* (leading minor {minor} vanishes)")]
    NotInGStar { minor: usize },
    #[error("group element does not centralize (deviation {deviation:.3e})")]
    NotCentralizing { deviation: f64 },
    #[error("point is outside W: {0}")]
    NotInW(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("{0} did not converge (residual {1:.3e})")]
    NoConvergence(&'static str, f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("write failed: {message}")]
    Output { kind: std::io::ErrorKind, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
