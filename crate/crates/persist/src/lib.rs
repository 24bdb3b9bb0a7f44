//! Experiments, parallel execution and file formats on top of `hermite-core`.
//!
//! The binary `hermite-persist` exposes one subcommand per experiment
//! (`simulate`, `persistence`, `exponent`, `tail`, `decorrelate`, `rank`,
//! `gci`, `moments`). Every run writes its result files plus a manifest with
//! SHA-256 digests. Outputs are byte-identical for a given configuration and
//! seed regardless of the worker count.

pub mod cli;
pub mod config;
pub mod exec;
pub mod formats;
pub mod manifest;
pub mod output;

pub use exec::{parallel_map, Parallel, TaskPanicked};
