//! conekit: positivity classification of matrices relative to simplicial
//! cones, inverse-positivity certificates from positive solvability of
//! Ax = -z, and numerical cross-checks of the four equivalent
//! characterizations of positive-semigroup generators.
//!
//! The crate is deliberately self-contained: dense LU and Jacobi singular
//! values live in [`mat`], and the LP feasibility engine behind the
//! classifiers is the auditable two-phase simplex in [`lpkernel`].

pub mod classify;
pub mod cli;
pub mod cone;
pub mod config;
pub mod error;
pub mod generate;
pub mod invpos;
pub mod lpkernel;
pub mod mat;
pub mod semigroup;

pub use config::Config;
pub use error::{Error, Result};
pub use mat::Mat;
