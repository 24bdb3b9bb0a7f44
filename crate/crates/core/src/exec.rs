//! Replica scheduling.
//!
//! Monte Carlo drivers hand an executor a replica count, a scratch factory
//! and a pure per-replica task. Implementations may run tasks in any order on
//! any number of threads but must return results in index order.

use alloc::vec::Vec;

pub trait ReplicaExecutor {
    /// Evaluates `task(scratch, i)` for `i in 0..count` and returns the
    /// results ordered by `i`. `init` builds per-worker scratch space.
    fn map_with<S, T, I, F>(&self, count: u64, init: I, task: F) -> Vec<T>
    where
        T: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, u64) -> T + Sync + Send;
}

/// Runs every task on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl ReplicaExecutor for Sequential {
    fn map_with<S, T, I, F>(&self, count: u64, init: I, task: F) -> Vec<T>
    where
        T: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, u64) -> T + Sync + Send,
    {
        let mut scratch = init();
        (0..count).map(|i| task(&mut scratch, i)).collect()
    }
}
