//! Small summary-statistics helpers shared by the estimators.

use alloc::vec::Vec;

/// Two-sided 97.5% standard normal quantile.
pub const Z_975: f64 = 1.959_963_984_540_054;

/// Sample mean and the standard error of the mean (population variance / n).
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, libm::sqrt(var / n))
}

/// Population variance and its standard error from the fourth central moment.
pub fn variance_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (m2, m4) = xs.iter().fold((0.0, 0.0), |(m2, m4), x| {
        let d = (x - mean) * (x - mean);
        (m2 + d, m4 + d * d)
    });
    let (m2, m4) = (m2 / n, m4 / n);
    (m2, libm::sqrt((m4 - m2 * m2).max(0.0) / n))
}

/// Binomial proportion with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proportion {
    pub p_hat: f64,
    pub stderr: f64,
}

impl Proportion {
    pub fn from_counts(hits: u64, trials: u64) -> Self {
        if trials == 0 {
            return Self {
                p_hat: f64::NAN,
                stderr: f64::NAN,
            };
        }
        let p_hat = hits as f64 / trials as f64;
        Self {
            p_hat,
            stderr: libm::sqrt(p_hat * (1.0 - p_hat) / trials as f64),
        }
    }
}

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// Standard error of the slope.
    pub slope_stderr: f64,
    /// Weighted residuals `sqrt(w) * (y - fit)`.
    pub residuals: Vec<f64>,
    /// Weighted residual sum of squares.
    pub chi2: f64,
}

/// Weighted least squares. With `known_variance` the slope error is taken
/// from the weights alone (`w = 1 / var`); otherwise it is scaled by the
/// residual variance.
pub fn weighted_line(xs: &[f64], ys: &[f64], ws: &[f64], known_variance: bool) -> Option<LineFit> {
    let k = xs.len();
    if k < 2 || ys.len() != k || ws.len() != k {
        return None;
    }
    let sw: f64 = ws.iter().sum();
    let xm = xs.iter().zip(ws).map(|(x, w)| x * w).sum::<f64>() / sw;
    let ym = ys.iter().zip(ws).map(|(y, w)| y * w).sum::<f64>() / sw;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for i in 0..k {
        sxx += ws[i] * (xs[i] - xm) * (xs[i] - xm);
        sxy += ws[i] * (xs[i] - xm) * (ys[i] - ym);
    }
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let residuals: Vec<f64> = (0..k)
        .map(|i| libm::sqrt(ws[i]) * (ys[i] - intercept - slope * xs[i]))
        .collect();
    let chi2 = residuals.iter().map(|r| r * r).sum::<f64>();
    let slope_var = if known_variance {
        1.0 / sxx
    } else if k > 2 {
        chi2 / (k - 2) as f64 / sxx
    } else {
        0.0
    };
    Some(LineFit {
        intercept,
        slope,
        slope_stderr: libm::sqrt(slope_var),
        residuals,
        chi2,
    })
}
