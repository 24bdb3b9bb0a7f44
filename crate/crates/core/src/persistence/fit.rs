use alloc::vec::Vec;

use super::PersistenceEstimate;
use crate::stats::{weighted_line, Z_975};
use crate::{Error, Result};

/// Minimum survivor count for a horizon to enter the regression.
pub const SURVIVOR_FLOOR: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub horizon: f64,
    pub p_hat: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub theta: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub intercept: f64,
    /// Points used in the fit.
    pub grid: Vec<GridPoint>,
    /// Horizons dropped for having fewer than `SURVIVOR_FLOOR` survivors.
    pub excluded: Vec<u64>,
    /// Weighted residuals of `log p_hat`.
    pub residuals: Vec<f64>,
    /// `chi^2 / (k - 2)` of the weighted fit, when `k > 2`.
    pub reduced_chi2: Option<f64>,
    /// False when some point had zero variance and the fit fell back to
    /// ordinary least squares.
    pub weighted: bool,
}

/// Fits `log p = a - theta log T` by weighted least squares.
///
/// Weights are inverse delta-method variances of `log p_hat`,
/// `(stderr / p_hat)^-2`. The slope error comes from the weights and is
/// inflated by `sqrt(reduced chi^2)` when that exceeds one. If any point
/// has zero variance all weights are set to one and the error is taken
/// from the residuals.
pub fn fit_power_law(points: &[GridPoint]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientData {
            usable: points.len(),
            required: 3,
        });
    }
    if points
        .iter()
        .any(|p| !(p.p_hat > 0.0) || !(p.horizon > 0.0) || !p.stderr.is_finite())
    {
        return Err(Error::DegenerateFit("probabilities and horizons must be positive"));
    }
    let xs: Vec<f64> = points.iter().map(|p| libm::log(p.horizon)).collect();
    let ys: Vec<f64> = points.iter().map(|p| libm::log(p.p_hat)).collect();
    let rel_var: Vec<f64> = points
        .iter()
        .map(|p| (p.stderr / p.p_hat) * (p.stderr / p.p_hat))
        .collect();
    let weighted = rel_var.iter().all(|&v| v > 0.0);
    let ws: Vec<f64> = if weighted {
        rel_var.iter().map(|v| 1.0 / v).collect()
    } else {
        alloc::vec![1.0; points.len()]
    };
    let line = weighted_line(&xs, &ys, &ws, weighted)
        .ok_or(Error::DegenerateFit("horizons do not vary"))?;
    let dof = points.len() - 2;
    let reduced_chi2 = (dof > 0).then(|| line.chi2 / dof as f64);
    let mut stderr = line.slope_stderr;
    if weighted {
        if let Some(r) = reduced_chi2 {
            if r > 1.0 {
                stderr *= libm::sqrt(r);
            }
        }
    }
    let theta = -line.slope;
    Ok(ExponentFit {
        theta,
        stderr,
        ci_low: theta - Z_975 * stderr,
        ci_high: theta + Z_975 * stderr,
        intercept: line.intercept,
        grid: points.to_vec(),
        excluded: Vec::new(),
        residuals: line.residuals,
        reduced_chi2,
        weighted,
    })
}

/// Exponent fit over horizons with at least `SURVIVOR_FLOOR` survivors.
pub fn fit_exponent(estimates: &[PersistenceEstimate]) -> Result<ExponentFit> {
    let (kept, dropped): (Vec<&PersistenceEstimate>, Vec<&PersistenceEstimate>) = estimates.iter().partition(|e| e.survivors >= SURVIVOR_FLOOR);
    if kept.len() < 3 {
        return Err(Error::InsufficientData {
            usable: kept.len(),
            required: 3,
        });
    }
    let points: Vec<GridPoint> = kept
        .iter()
        .map(|e| GridPoint {
            horizon: e.horizon as f64,
            p_hat: e.p_hat,
            stderr: e.stderr,
        })
        .collect();
    let mut fit = fit_power_law(&points)?;
    fit.excluded = dropped.iter().map(|e| e.horizon).collect();
    Ok(fit)
}
