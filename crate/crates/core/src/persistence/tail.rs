use alloc::vec::Vec;

use crate::process::{HermitePathConfig, PathModel};
use crate::stats::{weighted_line, Proportion};
use crate::{Error, ReplicaExecutor, Result};

/// Levels with fewer exceedances are left out of the stretch-exponent fit.
pub const MIN_TAIL_HITS: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailPoint {
    pub level: f64,
    pub hits: u64,
    pub replicas: u64,
    pub tail: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    /// `gamma` in `-log P(sup |Z| > u) ~ c u^gamma`.
    pub gamma: f64,
    pub gamma_stderr: f64,
    /// `log c`.
    pub log_c: f64,
    pub used_levels: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailCurve {
    pub points: Vec<TailPoint>,
    pub fit: TailFit,
    /// Levels below `MIN_TAIL_HITS` exceedances.
    pub sparse_levels: Vec<f64>,
}

/// Least squares of `log(-log tail)` on `log u` over levels with enough hits
/// and `0 < tail < 1`.
pub fn fit_tail_exponent(points: &[TailPoint]) -> Result<TailFit> {
    if points.iter().all(|p| p.hits == 0) {
        return Err(Error::DegenerateFit("no level was exceeded"));
    }
    let used: Vec<&TailPoint> = points
        .iter()
        .filter(|p| p.hits >= MIN_TAIL_HITS && p.tail > 0.0 && p.tail < 1.0 && p.level > 0.0)
        .collect();
    if used.len() < 2 {
        return Err(Error::InsufficientData {
            usable: used.len(),
            required: 2,
        });
    }
    let xs: Vec<f64> = used.iter().map(|p| libm::log(p.level)).collect();
    let ys: Vec<f64> = used.iter().map(|p| libm::log(-libm::log(p.tail))).collect();
    let line = weighted_line(&xs, &ys, &alloc::vec![1.0; xs.len()], false)
        .ok_or(Error::DegenerateFit("levels do not vary"))?;
    Ok(TailFit {
        gamma: line.slope,
        gamma_stderr: line.slope_stderr,
        log_c: line.intercept,
        used_levels: used.iter().map(|p| p.level).collect(),
    })
}

/// Empirical `P(max_k |Z_{k/n}| > u)` per level, on paths normalized by
/// `config`, with the stretch-exponent fit.
pub fn estimate_tail<E: ReplicaExecutor + ?Sized>(
    exec: &E,
    config: &HermitePathConfig,
    levels: &[f64],
    replicas: u64,
    seed: u64,
) -> Result<TailCurve> {
    if levels.is_empty() || levels[0] < 0.0 || levels.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config("levels must be nonnegative and strictly increasing"));
    }
    if replicas == 0 {
        return Err(Error::domain("replicas", 0.0, "replicas >= 1"));
    }
    let model = PathModel::new(*config)?;
    let summaries = model.map_sums(exec, replicas, seed, || (), |_, _, sums| {
        let max_abs = sums.iter().fold(0.0f64, |a, s| a.max(s.abs()));
        (max_abs, sums[sums.len() - 1])
    });
    let ends: Vec<f64> = summaries.iter().map(|s| s.1).collect();
    let factor = config.path_factor(&ends);
    let points: Vec<TailPoint> = levels
        .iter()
        .map(|&u| {
            let hits = summaries.iter().filter(|s| factor * s.0 > u).count() as u64;
            let p = Proportion::from_counts(hits, replicas);
            TailPoint {
                level: u,
                hits,
                replicas,
                tail: p.p_hat,
                stderr: p.stderr,
            }
        })
        .collect();
    let fit = fit_tail_exponent(&points)?;
    let sparse_levels = points
        .iter()
        .filter(|p| p.hits < MIN_TAIL_HITS)
        .map(|p| p.level)
        .collect();
    Ok(TailCurve {
        points,
        fit,
        sparse_levels,
    })
}
