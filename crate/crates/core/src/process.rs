//! Discretized Hermite-process paths.
//!
//! A stationary Gaussian sequence `X_0, X_1, ...` with covariance
//! `(1 + j^2)^(-alpha/2)`, `alpha = 2 (1 - H) / m`, is subordinated through
//! `h_m` and summed: `S_k = sum_{i<k} h_m(X_i)`. The path on `[0, 1]` is
//! `Z_{k/n} = c n^-H S_k` for `k = 1..n`, which converges to the order-`m`
//! Hermite process of index `H`.

use alloc::vec::Vec;

use crate::gaussian::{CovarianceSpec, GaussianSample, GaussianSource};
use crate::hermite::{factorial, hermite_eval};
use crate::stats::mean_stderr;
use crate::{Error, ReplicaExecutor, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `c = sqrt(H^2 - H/2)`; defined for `m = 2` only.
    PaperSigma,
    /// `c` chosen so the sample variance of `Z_1` across replicas is 1.
    EmpiricalUnitVariance,
    /// `c = 1`.
    Raw,
}

impl Normalization {
    pub fn name(self) -> &'static str {
        match self {
            Self::PaperSigma => "paper_sigma",
            Self::EmpiricalUnitVariance => "empirical_unit_variance",
            Self::Raw => "raw",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "paper_sigma" => Some(Self::PaperSigma),
            "empirical_unit_variance" => Some(Self::EmpiricalUnitVariance),
            "raw" => Some(Self::Raw),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitePathConfig {
    order: u32,
    hurst: f64,
    points: usize,
    normalization: Normalization,
}

/// Covariance decay exponent giving an `H`-self-similar limit at order `m`.
pub fn alpha_for(order: u32, hurst: f64) -> Result<f64> {
    if order == 0 {
        return Err(Error::domain("m", 0.0, "m >= 1"));
    }
    if !(hurst > 0.5 && hurst < 1.0) {
        return Err(Error::domain("H", hurst, "(1/2, 1)"));
    }
    Ok(2.0 * (1.0 - hurst) / order as f64)
}

/// `sqrt(H^2 - H/2)`.
pub fn paper_sigma(hurst: f64) -> f64 {
    libm::sqrt(hurst * hurst - 0.5 * hurst)
}

impl HermitePathConfig {
    pub fn new(order: u32, hurst: f64, points: usize, normalization: Normalization) -> Result<Self> {
        alpha_for(order, hurst)?;
        if points == 0 {
            return Err(Error::domain("n", 0.0, "n >= 1"));
        }
        if normalization == Normalization::PaperSigma && order != 2 {
            return Err(Error::Config("paper_sigma normalization is defined for m = 2 only"));
        }
        Ok(Self {
            order,
            hurst,
            points,
            normalization,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn alpha(&self) -> f64 {
        2.0 * (1.0 - self.hurst) / self.order as f64
    }

    pub fn with_points(mut self, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::domain("n", 0.0, "n >= 1"));
        }
        self.points = points;
        Ok(self)
    }

    pub fn covariance(&self) -> Result<CovarianceSpec> {
        CovarianceSpec::power_law(self.alpha(), self.points)
    }

    /// Normalizing constant `c` given the values of `S_n` over replicas.
    pub fn scale(&self, end_values: &[f64]) -> f64 {
        match self.normalization {
            Normalization::Raw => 1.0,
            Normalization::PaperSigma => paper_sigma(self.hurst),
            Normalization::EmpiricalUnitVariance => {
                let n = end_values.len() as f64;
                let mean = end_values.iter().sum::<f64>() / n;
                let var = end_values.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
                if var > 0.0 {
                    libm::pow(self.points as f64, self.hurst) / libm::sqrt(var)
                } else {
                    // Degenerate sample (single replica or constant input).
                    1.0
                }
            }
        }
    }

    /// Factor mapping `S_k` to `Z_{k/n}`.
    pub fn path_factor(&self, end_values: &[f64]) -> f64 {
        self.scale(end_values) * libm::pow(self.points as f64, -self.hurst)
    }
}

/// `Var(S_n) = m! sum_{i,j<n} r(i-j)^m`, exact for `f = h_m`.
pub fn exact_partial_sum_variance(spec: &CovarianceSpec, order: u32, n: usize) -> f64 {
    let m = order as i32;
    let off: f64 = (1..n).map(|d| (n - d) as f64 * libm::pow(spec.lag(d), m as f64)).sum();
    factorial(order as usize) * (n as f64 * libm::pow(spec.lag(0), m as f64) + 2.0 * off)
}

/// Per-replica cumulative sums `S_1..S_n` of `h_m(X_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSums {
    data: Vec<f64>,
    replicas: usize,
    len: usize,
    seed: u64,
}

/// `out[k-1] = S_k = sum_{i<k} h_m(x_i)`.
pub fn subordinate_into(x: &[f64], order: u32, out: &mut [f64]) {
    let mut acc = 0.0;
    for (o, &xi) in out.iter_mut().zip(x) {
        acc += hermite_eval(order as usize, xi);
        *o = acc;
    }
}

pub fn subordinate(sample: &GaussianSample, order: u32) -> PartialSums {
    let n = sample.len();
    let mut data = alloc::vec![0.0; sample.replicas() * n];
    for (row, out) in sample.rows().zip(data.chunks_exact_mut(n)) {
        subordinate_into(row, order, out);
    }
    PartialSums {
        data,
        replicas: sample.replicas(),
        len: n,
        seed: sample.seed(),
    }
}

impl PartialSums {
    pub fn replicas(&self) -> usize {
        self.replicas
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.replicas == 0
    }

    pub fn row(&self, replica: usize) -> &[f64] {
        &self.data[replica * self.len..(replica + 1) * self.len]
    }

    pub fn rows(&self) -> core::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.len)
    }

    /// `S_n` for every replica.
    pub fn end_values(&self) -> Vec<f64> {
        self.rows().map(|r| r[self.len - 1]).collect()
    }
}

/// Rescaled path `Z_{k/n}`, `k = 1..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePath {
    pub values: Vec<f64>,
    pub config: HermitePathConfig,
    pub seed: u64,
    /// The constant `c` in `Z = c n^-H S`.
    pub scale: f64,
}

impl DiscretePath {
    /// `h_m(X_k)` recovered from the increments of the path.
    pub fn increments(&self) -> Vec<f64> {
        let back = libm::pow(self.config.points as f64, self.config.hurst) / self.scale;
        let mut prev = 0.0;
        self.values
            .iter()
            .map(|&z| {
                let d = (z - prev) * back;
                prev = z;
                d
            })
            .collect()
    }
}

pub fn rescale(sums: &PartialSums, config: &HermitePathConfig) -> Result<Vec<DiscretePath>> {
    if sums.len() != config.points {
        return Err(Error::Config("partial sums length differs from config.n"));
    }
    let ends = sums.end_values();
    let scale = config.scale(&ends);
    let factor = scale * libm::pow(config.points as f64, -config.hurst);
    Ok(sums
        .rows()
        .map(|row| DiscretePath {
            values: row.iter().map(|s| factor * s).collect(),
            config: *config,
            seed: sums.seed,
            scale,
        })
        .collect())
}

/// Gaussian driver plus subordination for one configuration.
#[derive(Debug, Clone)]
pub struct PathModel {
    config: HermitePathConfig,
    source: GaussianSource,
}

impl PathModel {
    pub fn new(config: HermitePathConfig) -> Result<Self> {
        let source = GaussianSource::new(&config.covariance()?)?;
        Ok(Self { config, source })
    }

    /// Uses a caller-supplied driver, e.g. white noise.
    pub fn with_source(config: HermitePathConfig, source: GaussianSource) -> Result<Self> {
        if source.len() != config.points {
            return Err(Error::Config("driver length differs from config.n"));
        }
        Ok(Self { config, source })
    }

    pub fn config(&self) -> &HermitePathConfig {
        &self.config
    }

    pub fn source(&self) -> &GaussianSource {
        &self.source
    }

    /// Applies `task(user, replica, sums)` to the raw partial sums of each
    /// replica, results in replica order.
    pub fn map_sums<E, U, T, I, F>(&self, exec: &E, replicas: u64, seed: u64, init: I, task: F) -> Vec<T>
    where
        E: ReplicaExecutor + ?Sized,
        T: Send,
        I: Fn() -> U + Sync + Send,
        F: Fn(&mut U, u64, &[f64]) -> T + Sync + Send,
    {
        let order = self.config.order;
        let n = self.config.points;
        self.source.map_replicas(
            exec,
            replicas,
            seed,
            || (alloc::vec![0.0; n], init()),
            |(buf, user), replica, row| {
                subordinate_into(row, order, buf);
                task(user, replica, buf)
            },
        )
    }

    /// Full rescaled paths. Memory is `replicas x n`.
    pub fn simulate<E: ReplicaExecutor + ?Sized>(&self, exec: &E, replicas: usize, seed: u64) -> Result<Vec<DiscretePath>> {
        let rows = self.map_sums(exec, replicas as u64, seed, || (), |_, _, s| s.to_vec());
        let sums = PartialSums {
            data: rows.concat(),
            replicas,
            len: self.config.points,
            seed,
        };
        rescale(&sums, &self.config)
    }
}

/// `E[(max(0, max_k c S_k))^p]` with standard error, where `c` multiplies
/// every row.
pub fn max_moment(sums: &PartialSums, factor: f64, p: f64) -> (f64, f64) {
    let values: Vec<f64> = sums
        .rows()
        .map(|row| positive_max_power(row, factor, p))
        .collect();
    mean_stderr(&values)
}

fn positive_max_power(row: &[f64], factor: f64, p: f64) -> f64 {
    let m = row.iter().fold(0.0f64, |acc, &s| acc.max(factor * s));
    libm::pow(m, p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub n: usize,
    pub estimate: f64,
    pub stderr: f64,
    /// Estimate divided by the previous row's estimate.
    pub ratio: Option<f64>,
}

/// Estimates `E[(sup_k Z_{k/n})^p]` for each `n` in `n_grid`. The running
/// maximum includes `Z_0 = 0`. For a fixed normalization the estimates
/// settle as `n` grows, since `n^-pH E(max_k S_k)^p` converges.
pub fn moment_scaling_diagnostic<E: ReplicaExecutor + ?Sized>(
    exec: &E,
    config: &HermitePathConfig,
    p: f64,
    n_grid: &[usize],
    replicas: u64,
    seed: u64,
) -> Result<Vec<MomentRow>> {
    if !(p >= 1.0) {
        return Err(Error::domain("p", p, "[1, inf)"));
    }
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("n grid must be nonempty and strictly increasing"));
    }
    if replicas == 0 {
        return Err(Error::domain("replicas", 0.0, "replicas >= 1"));
    }
    let mut rows: Vec<MomentRow> = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let cfg = config.with_points(n)?;
        let model = PathModel::new(cfg)?;
        let summaries = model.map_sums(exec, replicas, seed, || (), |_, _, s| {
            let max = s.iter().fold(0.0f64, |a, &v| a.max(v));
            (max, s[s.len() - 1])
        });
        let ends: Vec<f64> = summaries.iter().map(|s| s.1).collect();
        let factor = cfg.path_factor(&ends);
        let values: Vec<f64> = summaries
            .iter()
            .map(|(max, _)| libm::pow(factor * max, p))
            .collect();
        let (estimate, stderr) = mean_stderr(&values);
        let ratio = rows.last().map(|prev| estimate / prev.estimate);
        rows.push(MomentRow {
            n,
            estimate,
            stderr,
            ratio,
        });
    }
    Ok(rows)
}
