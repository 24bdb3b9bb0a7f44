use alloc::vec::Vec;

use super::{fit_exponent, ExponentFit};
use crate::process::{HermitePathConfig, PathModel};
use crate::stats::Proportion;
use crate::{Error, ReplicaExecutor, Result};

/// Survival of a path whose running maximum is `max`.
///
/// Barrier 0 uses the strict event `max < 0`; any other barrier uses
/// `max <= barrier`.
#[inline]
pub fn survives(max: f64, barrier: f64) -> bool {
    if barrier == 0.0 {
        max < 0.0
    } else {
        max <= barrier
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistenceEstimate {
    pub horizon: u64,
    pub barrier: f64,
    pub survivors: u64,
    pub replicas: u64,
    pub p_hat: f64,
    pub stderr: f64,
}

impl PersistenceEstimate {
    pub fn from_counts(horizon: u64, barrier: f64, survivors: u64, replicas: u64) -> Self {
        let p = Proportion::from_counts(survivors, replicas);
        Self {
            horizon,
            barrier,
            survivors,
            replicas,
            p_hat: p.p_hat,
            stderr: p.stderr,
        }
    }
}

/// Estimates over a horizon x barrier grid, all from the same replicas.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceTable {
    pub horizons: Vec<u64>,
    pub barriers: Vec<f64>,
    pub oversample: usize,
    /// Factor taking raw partial sums to the unit-step process.
    pub unit_factor: f64,
    /// Horizon-major, barrier-minor.
    pub estimates: Vec<PersistenceEstimate>,
}

impl PersistenceTable {
    pub fn get(&self, horizon_index: usize, barrier_index: usize) -> &PersistenceEstimate {
        &self.estimates[horizon_index * self.barriers.len() + barrier_index]
    }

    /// Estimates at one barrier across all horizons.
    pub fn for_barrier(&self, barrier_index: usize) -> Vec<PersistenceEstimate> {
        (0..self.horizons.len())
            .map(|h| *self.get(h, barrier_index))
            .collect()
    }
}

/// Persistence probabilities `P(max_{1 <= t <= T} W_t <= b)` for each
/// horizon `T` and barrier `b`.
///
/// Paths have `oversample * max(horizons)` points, i.e. the unit-step process
/// sampled `oversample` times per unit. Horizon `T` takes the maximum over
/// grid points `oversample..=oversample * T`, so times before 1 never count;
/// with `oversample = 1` this is `max_{k = 1..T}`. The `points` field of
/// `config` is ignored.
pub fn persistence_table<E: ReplicaExecutor + ?Sized>(
    exec: &E,
    config: &HermitePathConfig,
    horizons: &[u64],
    barriers: &[f64],
    oversample: usize,
    replicas: u64,
    seed: u64,
) -> Result<PersistenceTable> {
    if horizons.is_empty() || horizons[0] == 0 || horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("horizons must be positive and strictly increasing"));
    }
    if barriers.is_empty() || barriers.iter().any(|b| b.is_nan()) {
        return Err(Error::Config("barriers must be nonempty and not NaN"));
    }
    if oversample == 0 {
        return Err(Error::domain("oversample", 0.0, "oversample >= 1"));
    }
    if replicas == 0 {
        return Err(Error::domain("replicas", 0.0, "replicas >= 1"));
    }
    let t_max = *horizons.last().expect("nonempty");
    let points = oversample * t_max as usize;
    let cfg = config.with_points(points)?;
    let model = PathModel::new(cfg)?;
    let cuts: Vec<usize> = horizons.iter().map(|&t| oversample * t as usize).collect();

    // Per replica: running maximum of S at each horizon, then S_N.
    let summaries = model.map_sums(exec, replicas, seed, || (), |_, _, sums| {
        let mut out = Vec::with_capacity(cuts.len() + 1);
        let mut max = f64::NEG_INFINITY;
        let mut next = 0;
        for (j, &s) in sums.iter().enumerate().skip(oversample - 1) {
            max = max.max(s);
            if j + 1 == cuts[next] {
                out.push(max);
                next += 1;
                if next == cuts.len() {
                    break;
                }
            }
        }
        out.push(sums[sums.len() - 1]);
        out
    });

    let ends: Vec<f64> = summaries.iter().map(|s| s[cuts.len()]).collect();
    let unit_factor = libm::pow(t_max as f64, cfg.hurst()) * cfg.path_factor(&ends);

    let mut estimates = Vec::with_capacity(horizons.len() * barriers.len());
    for (h, &horizon) in horizons.iter().enumerate() {
        for &barrier in barriers {
            let survivors = summaries
                .iter()
                .filter(|s| survives(unit_factor * s[h], barrier))
                .count() as u64;
            estimates.push(PersistenceEstimate::from_counts(horizon, barrier, survivors, replicas));
        }
    }
    Ok(PersistenceTable {
        horizons: horizons.to_vec(),
        barriers: barriers.to_vec(),
        oversample,
        unit_factor,
        estimates,
    })
}

/// Single horizon `T = config.points`.
pub fn estimate_persistence<E: ReplicaExecutor + ?Sized>(
    exec: &E,
    config: &HermitePathConfig,
    barrier: f64,
    replicas: u64,
    seed: u64,
) -> Result<PersistenceEstimate> {
    let table = persistence_table(exec, config, &[config.points() as u64], &[barrier], 1, replicas, seed)?;
    Ok(table.estimates[0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryRow {
    pub horizon: u64,
    pub p_minus: PersistenceEstimate,
    pub p_zero: PersistenceEstimate,
    pub p_plus: PersistenceEstimate,
    /// `p(-1) / p(0)`
    pub ratio_minus_zero: f64,
    /// `p(0) / p(+1)`
    pub ratio_zero_plus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryComparison {
    pub rows: Vec<BoundaryRow>,
    /// Exponent fits at barriers -1, 0, +1, where enough data exists.
    pub fits: [Option<ExponentFit>; 3],
    pub table: PersistenceTable,
}

pub const BOUNDARY_BARRIERS: [f64; 3] = [-1.0, 0.0, 1.0];

/// Persistence at barriers -1, 0 and +1 on shared replicas.
pub fn boundary_comparison<E: ReplicaExecutor + ?Sized>(
    exec: &E,
    config: &HermitePathConfig,
    horizons: &[u64],
    oversample: usize,
    replicas: u64,
    seed: u64,
) -> Result<BoundaryComparison> {
    let table = persistence_table(exec, config, horizons, &BOUNDARY_BARRIERS, oversample, replicas, seed)?;
    let rows = (0..horizons.len())
        .map(|h| {
            let (m, z, p) = (*table.get(h, 0), *table.get(h, 1), *table.get(h, 2));
            BoundaryRow {
                horizon: horizons[h],
                ratio_minus_zero: m.p_hat / z.p_hat,
                ratio_zero_plus: z.p_hat / p.p_hat,
                p_minus: m,
                p_zero: z,
                p_plus: p,
            }
        })
        .collect();
    let fits = [0, 1, 2].map(|b| fit_exponent(&table.for_barrier(b)).ok());
    Ok(BoundaryComparison { rows, fits, table })
}
