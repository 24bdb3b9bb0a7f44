use alloc::vec::Vec;

use crate::{Error, Result};

/// `r(j) = (1 + j^2)^(-alpha/2)`.
#[inline]
pub fn power_law_lag(alpha: f64, j: usize) -> f64 {
    let j = j as f64;
    libm::pow(1.0 + j * j, -0.5 * alpha)
}

/// Autocovariance `r(0..n)` of a stationary sequence.
///
/// Built either from the power-law family (`alpha` recorded) or from explicit
/// values. Beyond the stored lags, the power-law family extends analytically
/// and explicit specs extend by zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSpec {
    alpha: Option<f64>,
    values: Vec<f64>,
}

pub fn make_covariance(alpha: f64, length: usize) -> Result<CovarianceSpec> {
    CovarianceSpec::power_law(alpha, length)
}

impl CovarianceSpec {
    pub fn power_law(alpha: f64, length: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain("alpha", alpha, "(0, 1)"));
        }
        if length == 0 {
            return Err(Error::EmptySpec);
        }
        Ok(Self {
            alpha: Some(alpha),
            values: (0..length).map(|j| power_law_lag(alpha, j)).collect(),
        })
    }

    /// Explicit lags. No definiteness check is made here; samplers report
    /// failures when they factor the covariance.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySpec);
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain("covariance value", bad, "finite reals"));
        }
        Ok(Self { alpha: None, values })
    }

    pub fn white_noise(length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::EmptySpec);
        }
        let mut values = alloc::vec![0.0; length];
        values[0] = 1.0;
        Self::from_values(values)
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Covariance at lag `j`, including lags past the stored length.
    pub fn lag(&self, j: usize) -> f64 {
        match (self.values.get(j), self.alpha) {
            (Some(&v), _) => v,
            (None, Some(alpha)) => power_law_lag(alpha, j),
            (None, None) => 0.0,
        }
    }

    /// Dense Toeplitz matrix, row-major.
    pub fn toeplitz(&self) -> Vec<f64> {
        let n = self.len();
        let mut m = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = self.values[i.abs_diff(j)];
            }
        }
        m
    }
}
