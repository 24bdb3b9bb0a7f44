//! Joint-versus-product checks for persistence events on disjoint blocks.
//!
//! Every check estimates the joint probability and each marginal on the
//! same replicas, so the margin `joint - prod(marginals)` has its variance
//! reduced by the positive coupling. Standard errors use the full covariance
//! of the indicator means through the delta method.

use alloc::vec::Vec;

use crate::gaussian::{cholesky_lower, GaussianSample};
use crate::hermite::hermite_eval;
use crate::process::{HermitePathConfig, PathModel};
use crate::rng::{self, Domain};
use crate::stats::Proportion;
use crate::{Error, ReplicaExecutor, Result};

const MAX_BLOCKS: usize = 63;

/// Block boundaries `t_0 < ... < t_d` on the path grid and levels
/// `a_1..a_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSpec {
    times: Vec<usize>,
    levels: Vec<f64>,
}

impl PartitionSpec {
    pub fn new(times: Vec<usize>, levels: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::Partition("need at least one block"));
        }
        if times.len() - 1 > MAX_BLOCKS {
            return Err(Error::Partition("too many blocks"));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Partition("times must be strictly increasing (empty block)"));
        }
        if levels.len() != times.len() - 1 {
            return Err(Error::Partition("need one level per block"));
        }
        if levels.iter().any(|a| a.is_nan()) {
            return Err(Error::Partition("levels must not be NaN"));
        }
        Ok(Self { times, levels })
    }

    /// Blocks covering `[0, n)` split at the given fractions of `n`.
    pub fn from_fractions(n: usize, fractions: &[f64], levels: Vec<f64>) -> Result<Self> {
        let times = fractions
            .iter()
            .map(|f| libm::round(f * n as f64) as usize)
            .collect();
        Self::new(times, levels)
    }

    pub fn times(&self) -> &[usize] {
        &self.times
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn blocks(&self) -> usize {
        self.levels.len()
    }

    fn check_within(&self, n: usize) -> Result<()> {
        let last = *self.times.last().expect("validated");
        if last > n {
            return Err(Error::Partition("time beyond the path grid"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecorrelationReport {
    pub joint: Proportion,
    pub marginals: Vec<Proportion>,
    pub product: f64,
    pub product_stderr: f64,
    /// `joint - product`
    pub margin: f64,
    pub margin_stderr: f64,
    /// `margin / margin_stderr`; zero when both vanish.
    pub z_score: f64,
    pub replicas: u64,
    /// Set when the inequality is not claimed for the configuration
    /// (Hermite order other than two).
    pub exploratory: bool,
}

/// Builds the report from per-replica event bitmasks (`bit i` = event `i`).
pub fn tally(masks: &[u64], events: usize, exploratory: bool) -> DecorrelationReport {
    let r = masks.len() as u64;
    let full = if events == 64 { u64::MAX } else { (1u64 << events) - 1 };
    let joint_hits = masks.iter().filter(|&&m| m & full == full).count() as u64;
    let mut pair_hits = alloc::vec![0u64; events * events];
    for &m in masks {
        for i in 0..events {
            if m >> i & 1 == 0 {
                continue;
            }
            for j in i..events {
                if m >> j & 1 == 1 {
                    pair_hits[i * events + j] += 1;
                }
            }
        }
    }
    let rf = r as f64;
    let p = |i: usize, j: usize| pair_hits[i.min(j) * events + i.max(j)] as f64 / rf;
    let marginals: Vec<Proportion> = (0..events)
        .map(|i| Proportion::from_counts(pair_hits[i * events + i], r))
        .collect();
    let joint = Proportion::from_counts(joint_hits, r);
    let product: f64 = marginals.iter().map(|m| m.p_hat).product();
    // h_i = prod_{j != i} p_j
    let h: Vec<f64> = (0..events)
        .map(|i| {
            marginals
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, m)| m.p_hat)
                .product()
        })
        .collect();
    let pj = joint.p_hat;
    let mut var_product = 0.0;
    let mut cov_joint_product = 0.0;
    for i in 0..events {
        let pi = marginals[i].p_hat;
        // The joint event is contained in every marginal event.
        cov_joint_product += h[i] * (pj - pj * pi);
        for j in 0..events {
            let pj_m = marginals[j].p_hat;
            var_product += h[i] * h[j] * (p(i, j) - pi * pj_m);
        }
    }
    let var_joint = pj * (1.0 - pj);
    let var_margin = (var_joint - 2.0 * cov_joint_product + var_product).max(0.0) / rf;
    let margin = pj - product;
    let margin_stderr = libm::sqrt(var_margin);
    let z_score = if margin_stderr > 0.0 {
        margin / margin_stderr
    } else if margin == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(margin)
    };
    DecorrelationReport {
        joint,
        marginals,
        product,
        product_stderr: libm::sqrt(var_product.max(0.0) / rf),
        margin,
        margin_stderr,
        z_score,
        replicas: r,
        exploratory,
    }
}

/// Largest increment over block `[start, end)` of a path with `S_0 = 0`
/// and `sums[k-1] = S_k`. Includes `k = start`, so it is never negative.
fn left_closed_block_max(sums: &[f64], start: usize, end: usize) -> f64 {
    let at = |k: usize| if k == 0 { 0.0 } else { sums[k - 1] };
    let base = at(start);
    (start + 1..end).fold(0.0f64, |m, k| m.max(at(k) - base))
}

/// Largest increment over `k = start+1..=end`, as in the discrete sums.
fn right_closed_block_max(sums: &[f64], start: usize, end: usize) -> f64 {
    let at = |k: usize| if k == 0 { 0.0 } else { sums[k - 1] };
    let base = at(start);
    (start + 1..=end).fold(f64::NEG_INFINITY, |m, k| m.max(at(k) - base))
}

/// Checks `P(all blocks: sup_{[t_{i-1}, t_i)} Z_t - Z_{t_{i-1}} <= a_i)`
/// against the product of the block probabilities on rescaled paths.
pub fn check_decorrelation<E: ReplicaExecutor + ?Sized>(
    exec: &E,
    config: &HermitePathConfig,
    partition: &PartitionSpec,
    replicas: u64,
    seed: u64,
) -> Result<DecorrelationReport> {
    check_decorrelation_on(exec, &PathModel::new(*config)?, partition, replicas, seed)
}

/// As [`check_decorrelation`] with an explicit path model, e.g. one driven
/// by white noise.
pub fn check_decorrelation_on<E: ReplicaExecutor + ?Sized>(
    exec: &E,
    model: &PathModel,
    partition: &PartitionSpec,
    replicas: u64,
    seed: u64,
) -> Result<DecorrelationReport> {
    let config = model.config();
    partition.check_within(config.points())?;
    if replicas == 0 {
        return Err(Error::domain("replicas", 0.0, "replicas >= 1"));
    }
    let d = partition.blocks();
    let times = partition.times();
    let stats = model.map_sums(exec, replicas, seed, || (), |_, _, sums| {
        let mut out: Vec<f64> = (0..d)
            .map(|i| left_closed_block_max(sums, times[i], times[i + 1]))
            .collect();
        out.push(sums[sums.len() - 1]);
        out
    });
    let ends: Vec<f64> = stats.iter().map(|s| s[d]).collect();
    let factor = config.path_factor(&ends);
    let masks: Vec<u64> = stats
        .iter()
        .map(|s| {
            (0..d).fold(0u64, |m, i| {
                m | (u64::from(factor * s[i] <= partition.levels()[i]) << i)
            })
        })
        .collect();
    Ok(tally(&masks, d, config.order() != 2))
}

/// Joint-versus-product check for the raw partial sums of `h_m(X_i)`:
/// block `i` is `max_{n_{i-1} < k <= n_i} S_k - S_{n_{i-1}} <= a_i`.
pub fn check_discrete_inequality(
    driver: &GaussianSample,
    partition: &PartitionSpec,
    order: u32,
) -> Result<DecorrelationReport> {
    partition.check_within(driver.len())?;
    let d = partition.blocks();
    let times = partition.times();
    let mut sums = alloc::vec![0.0; driver.len()];
    let masks: Vec<u64> = driver
        .rows()
        .map(|row| {
            let mut acc = 0.0;
            for (s, &x) in sums.iter_mut().zip(row) {
                acc += hermite_eval(order as usize, x);
                *s = acc;
            }
            (0..d).fold(0u64, |m, i| {
                let stat = right_closed_block_max(&sums, times[i], times[i + 1]);
                m | (u64::from(stat <= partition.levels()[i]) << i)
            })
        })
        .collect();
    Ok(tally(&masks, d, order != 2))
}

/// Origin-symmetric convex sets.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    /// `|x_k| <= half_widths[k]`; infinite widths leave a coordinate free.
    Box { half_widths: Vec<f64> },
    /// Euclidean ball of `radius` in the listed coordinates.
    Ball { radius: f64, coords: Vec<usize> },
}

impl ConvexSet {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Self::Box { half_widths } => x.iter().zip(half_widths).all(|(v, w)| v.abs() <= *w),
            Self::Ball { radius, coords } => {
                coords.iter().map(|&k| x[k] * x[k]).sum::<f64>() <= radius * radius
            }
        }
    }

    fn check_dimension(&self, dim: usize) -> Result<()> {
        let ok = match self {
            Self::Box { half_widths } => half_widths.len() == dim && half_widths.iter().all(|w| *w >= 0.0),
            Self::Ball { radius, coords } => *radius >= 0.0 && coords.iter().all(|&k| k < dim),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config("set does not match the Gaussian dimension"))
        }
    }
}

/// Monte Carlo check of `P(X in C_1 and ... ) >= prod P(X in C_i)` for a
/// centered Gaussian vector with covariance `covariance` (row-major).
pub fn gci_sanity<E: ReplicaExecutor + ?Sized>(
    exec: &E,
    dim: usize,
    covariance: &[f64],
    sets: &[ConvexSet],
    replicas: u64,
    seed: u64,
) -> Result<DecorrelationReport> {
    if !(1..=4).contains(&dim) {
        return Err(Error::domain("dimension", dim as f64, "1..=4"));
    }
    if covariance.len() != dim * dim {
        return Err(Error::Config("covariance must be dim x dim"));
    }
    if sets.is_empty() || sets.len() > MAX_BLOCKS {
        return Err(Error::Config("need between 1 and 63 sets"));
    }
    for s in sets {
        s.check_dimension(dim)?;
    }
    if replicas == 0 {
        return Err(Error::domain("replicas", 0.0, "replicas >= 1"));
    }
    let lower = cholesky_lower(covariance, dim)?;
    let masks = exec.map_with(
        replicas,
        || ([0.0f64; 4], [0.0f64; 4]),
        |(z, x), replica| {
            let mut rng = rng::stream(seed, Domain::Gci, replica);
            rng::fill_standard_normal(&mut rng, &mut z[..dim]);
            for i in 0..dim {
                x[i] = (0..=i).map(|k| lower[i * dim + k] * z[k]).sum();
            }
            sets.iter()
                .enumerate()
                .fold(0u64, |m, (i, s)| m | (u64::from(s.contains(&x[..dim])) << i))
        },
    );
    Ok(tally(&masks, sets.len(), false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::Normalization;
    use crate::Sequential;

    #[test]
    fn partition_validation() {
        assert!(PartitionSpec::new(alloc::vec![0], alloc::vec![]).is_err());
        assert!(PartitionSpec::new(alloc::vec![0, 4, 4], alloc::vec![1.0, 1.0]).is_err());
        assert!(PartitionSpec::new(alloc::vec![0, 4], alloc::vec![1.0, 1.0]).is_err());
        assert!(PartitionSpec::new(alloc::vec![0, 4], alloc::vec![f64::NAN]).is_err());
        let p = PartitionSpec::from_fractions(100, &[0.0, 0.5, 1.0], alloc::vec![1.0, 2.0]).unwrap();
        assert_eq!(p.times(), &[0, 50, 100]);
        assert!(p.check_within(99).is_err());
    }

    #[test]
    fn tally_independent_bits() {
        // Events 0 and 1 independent with probability 1/2 each.
        let masks: Vec<u64> = (0..4).collect();
        let r = tally(&masks, 2, false);
        assert_eq!(r.joint.p_hat, 0.25);
        assert_eq!(r.product, 0.25);
        assert_eq!(r.margin, 0.0);
        assert!(r.product <= r.marginals.iter().map(|m| m.p_hat).fold(1.0, f64::min));
    }

    #[test]
    fn block_maxima() {
        let sums = [1.0, -1.0, 2.0, 0.5];
        // [0, 3): S_0 = 0, S_1 = 1, S_2 = -1
        assert_eq!(left_closed_block_max(&sums, 0, 3), 1.0);
        // [2, 4): base S_2 = -1, S_3 = 2
        assert_eq!(left_closed_block_max(&sums, 2, 4), 3.0);
        // (1, 3]: base S_1 = 1, S_2 = -1, S_3 = 2
        assert_eq!(right_closed_block_max(&sums, 1, 3), 1.0);
    }

    #[test]
    fn single_block_has_zero_margin() {
        let cfg = HermitePathConfig::new(2, 0.7, 64, Normalization::EmpiricalUnitVariance).unwrap();
        let p = PartitionSpec::new(alloc::vec![0, 40], alloc::vec![0.4]).unwrap();
        let r = check_decorrelation(&Sequential, &cfg, &p, 2000, 3).unwrap();
        assert_eq!(r.margin, 0.0);
        assert_eq!(r.z_score, 0.0);
        assert_eq!(r.joint, r.marginals[0]);
        assert!(!r.exploratory);
        let cfg3 = HermitePathConfig::new(3, 0.7, 64, Normalization::EmpiricalUnitVariance).unwrap();
        assert!(check_decorrelation(&Sequential, &cfg3, &p, 10, 3).unwrap().exploratory);
    }

    #[test]
    fn gci_rejects_bad_input() {
        let cov = [1.0, 0.5, 0.5, 1.0];
        let b = ConvexSet::Box { half_widths: alloc::vec![1.0, f64::INFINITY] };
        assert!(gci_sanity(&Sequential, 5, &[0.0; 25], &[b.clone()], 10, 1).is_err());
        assert!(gci_sanity(&Sequential, 2, &[1.0, 2.0, 2.0, 1.0], &[b.clone()], 10, 1).is_err());
        let wrong = ConvexSet::Ball { radius: 1.0, coords: alloc::vec![2] };
        assert!(gci_sanity(&Sequential, 2, &cov, &[b, wrong], 10, 1).is_err());
    }
}
