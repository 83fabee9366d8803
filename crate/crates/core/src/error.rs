use thiserror::Error;

use crate::tree_groups::GroupPreset;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown group `{0}` (expected g, gtilde, gamma, gammabar or gammabarbar)")]
    UnknownGroup(String),

    #[error("generator `{name}` does not belong to {group}")]
    UnknownGenerator { group: GroupPreset, name: String },

    #[error("dimension {dim} exceeds the resource cap {cap}")]
    ResourceLimit { dim: usize, cap: usize },

    #[error("portrait depth exceeds {0}")]
    DepthExceeded(usize),

    #[error("matrix is not symmetric (entry ({row}, {col}))")]
    NotSymmetric { row: usize, col: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("{0} is not an eigenvalue")]
    NotAnEigenvalue(f64),

    #[error("x = {0} lies outside the support of the density")]
    OutsideSupport(f64),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
