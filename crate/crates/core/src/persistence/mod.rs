//! Monte Carlo persistence probabilities, exponent fits and tail curves.
//!
//! A path of `N` points on `[0, 1]` is read as the unit-step process
//! `W_t = T^H Z_{t/T}` on `[0, T]` (equal in law by self-similarity), so a
//! single simulation at the largest horizon yields nested estimates for
//! every smaller horizon from prefixes of the same replicas.

mod estimate;
mod fit;
mod tail;

pub use estimate::{
    boundary_comparison, estimate_persistence, persistence_table, survives, BoundaryComparison, BoundaryRow,
    PersistenceEstimate, PersistenceTable,
};
pub use fit::{fit_exponent, fit_power_law, ExponentFit, GridPoint, SURVIVOR_FLOOR};
pub use tail::{estimate_tail, fit_tail_exponent, TailCurve, TailFit, TailPoint, MIN_TAIL_HITS};
