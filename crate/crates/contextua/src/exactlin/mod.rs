//! Exact scalar arithmetic and linear algebra over the field generated by
//! sqrt(2) and the imaginary unit, the smallest field containing every entry
//! used by the embedded ray sets.

mod linalg;
mod scalar;

pub use linalg::{inner, projector_onto, Mat, Vect};
pub use scalar::Scalar;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DIM: usize = 8;

/// Soft cap on ambient dimension, overridable through `CONTEXTUA_MAX_DIM`.
pub fn max_dim() -> usize {
    std::env::var("CONTEXTUA_MAX_DIM")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_DIM)
}

/// Validates an ambient dimension arriving from external input.
pub fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::domain("dimension must be positive"));
    }
    let cap = max_dim();
    if dim > cap {
        return Err(Error::domain(format!(
            "dimension {dim} exceeds the cap {cap} (set CONTEXTUA_MAX_DIM to raise it)"
        )));
    }
    Ok(())
}
