//! Co-sparse analysis model toolkit.
//!
//! A signal `x` is co-sparse over an analysis dictionary `Ω` (a `p×d`
//! operator with unit-norm rows) when `Ωx` contains many zeros. This crate
//! provides the building blocks for working with that model:
//!
//! - [`linalg`]: dense kernels with explicit tolerances (rank-tracking
//!   Gram-Schmidt, null-space projectors)
//! - [`dictionary`]: the DIF / RAND / MIX operator families
//! - [`signal`]: co-sparse signal generation and noise models
//! - [`pursuit`]: the analysis thresholding algorithm and its oracle
//! - [`metrics`]: signature, spark, co-sparsity distributions and the
//!   restricted orthogonal projection property (ROPP)
//! - [`bounds`]: closed-form lower bounds on the probability of successful
//!   co-support recovery
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live
//! in the companion `cosparse` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod dictionary;
mod error;
pub mod linalg;
pub mod metrics;
pub mod pursuit;
pub mod rng;
pub mod signal;

pub use error::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Relative tolerance deciding whether a Gram-Schmidt residual still carries
/// rank, measured against the inserted row's norm.
pub const TOL_RANK: f64 = 1e-10;

/// Absolute tolerance for projector symmetry/idempotence assertions.
pub const TOL_PROJ: f64 = 1e-8;

/// Absolute tolerance for orthonormality assertions.
pub const TOL_ORTH: f64 = 1e-8;

/// Threshold below which an analysis coefficient counts as a zero when
/// detecting effective co-supports.
pub const EPS0: f64 = 1e-8;
