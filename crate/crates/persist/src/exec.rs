use std::any::Any;
use std::ops::Range;
use std::panic::{catch_unwind, AssertUnwindSafe};

use hermite_core::ReplicaExecutor;
use rayon::prelude::*;

/// Thread-pool executor. Results come back in replica order, so anything
/// computed from them is independent of the worker count.
#[derive(Debug)]
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()?;
        Ok(Self { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl ReplicaExecutor for Parallel {
    fn map_with<S, T, I, F>(&self, count: u64, init: I, task: F) -> Vec<T>
    where
        T: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, u64) -> T + Sync + Send,
    {
        self.pool.install(|| {
            (0..count)
                .into_par_iter()
                .map_init(&init, |scratch, i| task(scratch, i))
                .collect()
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("replica task panicked: {message}")]
pub struct TaskPanicked {
    pub message: String,
}

impl TaskPanicked {
    pub fn from_payload(payload: Box<dyn Any + Send>) -> Self {
        let message = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".to_string());
        Self { message }
    }
}

/// Runs `task` over `range` on `workers` threads and returns results in
/// index order. A panicking task aborts the whole map.
pub fn parallel_map<T, F>(range: Range<u64>, task: F, workers: usize) -> Result<Vec<T>, TaskPanicked>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let exec = Parallel::new(workers).map_err(|e| TaskPanicked {
        message: e.to_string(),
    })?;
    let start = range.start;
    let count = range.end.saturating_sub(range.start);
    catch_unwind(AssertUnwindSafe(|| {
        exec.map_with(count, || (), |_, i| task(start + i))
    }))
    .map_err(TaskPanicked::from_payload)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_and_worker_invariant() {
        let square = |i: u64| i * i;
        let one = parallel_map(10..1000, square, 1).unwrap();
        let eight = parallel_map(10..1000, square, 8).unwrap();
        assert_eq!(one, eight);
        assert_eq!(one[0], 100);
        assert_eq!(one.len(), 990);
    }

    #[test]
    fn empty_range() {
        assert!(parallel_map(5..5, |i| i, 4).unwrap().is_empty());
    }

    #[test]
    fn panic_aborts() {
        let err = parallel_map(
            0..100,
            |i| {
                if i == 7 {
                    panic!("replica {i} failed");
                }
                i
            },
            4,
        )
        .unwrap_err();
        assert!(err.message.contains("replica 7"));
    }
}
