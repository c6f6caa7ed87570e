//! Error type shared by every computation in the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    /// A requested space or matrix would exceed the configured cell guard.
    #[error("size guard: dimension {dim} exceeds the configured limit {limit} (set WITTEN_MAX_CELL_DIM or --max-cell-dim to override)")]
    SizeGuard { dim: usize, limit: usize },

    /// The form fails the closedness test; the witness is the nonzero image vector.
    #[error("form is not closed")]
    NotClosed,

    /// The induced linear system has a base point, so the Euler class is undefined.
    #[error("form is degenerate: the induced linear system has a base point")]
    Degenerate,

    /// Two consecutive differentials do not compose to zero.
    #[error("differentials do not square to zero at position {position}")]
    CompositionNotZero { position: i64 },

    /// Total-complex cohomology survives past the proven vanishing bound.
    #[error("cohomology of K_{i}^* does not vanish at degree {n} >= n0 = {n0}")]
    VanishingViolation { i: u32, n: i64, n0: i64 },

    /// Mismatched dimensions in caller-supplied data.
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
