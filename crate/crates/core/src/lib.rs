//! Simulation and statistical verification kernels for Hermite processes.
//!
//! Paths of the order-`m` Hermite process with self-similarity index `H` are
//! built from the non-central limit theorem: a stationary Gaussian sequence
//! with covariance `r(j) = (1 + j^2)^(-alpha/2)` is pushed through the Hermite
//! polynomial `h_m`, summed, and rescaled by `n^-H`. On top of that sit Monte
//! Carlo estimators for persistence probabilities, exponent and tail fits,
//! and joint-versus-product checks of decorrelation inequalities.
//!
//! The crate is `no_std` and only needs `alloc`. All Monte Carlo drivers are
//! generic over a [`ReplicaExecutor`]; [`Sequential`] is provided here and a
//! thread pool executor lives in the companion `hermite-persist` crate. Every
//! replica draws from its own keyed random stream, so results depend only on
//! the seed and never on how replicas were scheduled.
#![no_std]
#![warn(rust_2018_idioms, missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod decorrelation;
mod error;
pub mod exec;
pub mod fft;
pub mod gaussian;
pub mod hermite;
pub mod persistence;
pub mod process;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use exec::{ReplicaExecutor, Sequential};

/// Seed used whenever a caller does not provide one.
pub const DEFAULT_SEED: u64 = 0x4845_524D_5345_4544;
