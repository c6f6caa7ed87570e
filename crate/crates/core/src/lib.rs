//! Exact computation of K-theory Euler classes of two-term complexes of
//! rational vector spaces equipped with a closed nondegenerate form, together
//! with their degree-zero Chow realization.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`] — sparse exact rational matrices (rank, kernel, image);
//! * [`multilinear`] — canonical bases of symmetric and exterior powers and
//!   the induced maps, products, and coproducts;
//! * [`koszul`] — symmetric and exterior power complexes of a two-term
//!   complex and their cohomology;
//! * [`witten`] — closed/nondegenerate forms, the bigraded double complex,
//!   total complexes, the Euler class, and its homotopy and stabilization
//!   invariance apparatus;
//! * [`periodic`] — the 2-periodic reorganization of the double complex;
//! * [`chern`] — truncated Chern character / Todd class series in formal
//!   roots;
//! * [`scenarios`] — ready-made spin-curve instances and closed forms;
//! * [`sample`] — seeded random generators for the property suites;
//! * [`selftest`] — the randomized invariant suites behind `wtc selftest`.
//!
//! Heavy inner loops (elimination, matrix products, per-index total
//! complexes, suite batches) run data-parallel under the default `parallel`
//! feature and sequentially without it.

pub mod chern;
pub mod error;
pub mod exec;
pub mod guard;
pub mod koszul;
pub mod linalg;
pub mod multilinear;
pub mod periodic;
pub mod sample;
pub mod scenarios;
pub mod selftest;
pub mod witten;

pub use error::{CoreError, Result};
pub use linalg::{rat, ratio, RMatrix, Rational};
