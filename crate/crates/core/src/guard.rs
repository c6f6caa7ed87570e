//! Global cell-size guard.
//!
//! Symmetric powers grow combinatorially; the guard refuses to materialize any
//! basis, matrix side, or total-complex slice larger than the configured
//! limit. The default is 200 000 and can be overridden programmatically or via
//! the `WITTEN_MAX_CELL_DIM` environment variable.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use crate::error::{CoreError, Result};

pub const DEFAULT_MAX_CELL_DIM: usize = 200_000;

static LIMIT: AtomicUsize = AtomicUsize::new(0);
static ENV_INIT: OnceLock<usize> = OnceLock::new();

fn env_default() -> usize {
    *ENV_INIT.get_or_init(|| {
        std::env::var("WITTEN_MAX_CELL_DIM")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_MAX_CELL_DIM)
    })
}

/// Current limit on any single dimension.
pub fn max_cell_dim() -> usize {
    let v = LIMIT.load(Ordering::Relaxed);
    if v == 0 {
        env_default()
    } else {
        v
    }
}

/// Override the limit for the rest of the process.
pub fn set_max_cell_dim(limit: usize) {
    LIMIT.store(limit.max(1), Ordering::Relaxed);
}

/// Fail with `CoreError::SizeGuard` if `dim` exceeds the limit.
pub fn check(dim: usize) -> Result<()> {
    let limit = max_cell_dim();
    if dim > limit {
        Err(CoreError::SizeGuard { dim, limit })
    } else {
        Ok(())
    }
}
