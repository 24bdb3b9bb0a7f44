use alloc::vec::Vec;

use super::GaussianSample;
use crate::stats::mean_stderr;
use crate::{Error, Result};

/// Cross-replica estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Average of `X_i X_j` over replicas.
pub fn position_covariance(sample: &GaussianSample, i: usize, j: usize) -> Result<LagEstimate> {
    let n = sample.len();
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::Range { index: idx, len: n });
        }
    }
    let products: Vec<f64> = sample.rows().map(|row| row[i] * row[j]).collect();
    let (estimate, stderr) = mean_stderr(&products);
    Ok(LagEstimate { estimate, stderr })
}

/// `E[X_0 X_j]` for `j = 0..=max_lag`.
pub fn empirical_covariance(sample: &GaussianSample, max_lag: usize) -> Result<Vec<LagEstimate>> {
    if max_lag >= sample.len() {
        return Err(Error::Range {
            index: max_lag,
            len: sample.len(),
        });
    }
    (0..=max_lag).map(|j| position_covariance(sample, 0, j)).collect()
}
