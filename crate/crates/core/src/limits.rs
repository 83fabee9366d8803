//! Resource caps.

use crate::error::{Error, Result};

/// Environment variable overriding the dense-matrix dimension cap.
pub const MAX_DIM_ENV: &str = "FRACTAL_SPECTRA_MAX_DIM";

/// Largest level size handled by permutation/graph code.
pub const SPARSE_DIM_CAP: usize = 1 << 22;

/// Default cap on dense (exact or float) matrix dimension.
pub const DEFAULT_DENSE_DIM_CAP: usize = 2187;

pub fn env_max_dim() -> Option<usize> {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
}

pub fn dense_dim_cap() -> usize {
    env_max_dim().unwrap_or(DEFAULT_DENSE_DIM_CAP)
}

fn checked_pow(d: usize, level: usize, cap: usize) -> Result<usize> {
    let dim = u32::try_from(level)
        .ok()
        .and_then(|l| d.checked_pow(l))
        .ok_or(Error::ResourceLimit {
            dim: usize::MAX,
            cap,
        })?;
    if dim > cap {
        return Err(Error::ResourceLimit { dim, cap });
    }
    Ok(dim)
}

/// `d^level`, failing beyond [`SPARSE_DIM_CAP`].
pub fn level_dim(d: usize, level: usize) -> Result<usize> {
    checked_pow(d, level, SPARSE_DIM_CAP.max(env_max_dim().unwrap_or(0)))
}

/// `d^level`, failing beyond the dense cap.
pub fn dense_dim(d: usize, level: usize) -> Result<usize> {
    checked_pow(d, level, dense_dim_cap())
}
