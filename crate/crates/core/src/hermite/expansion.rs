use alloc::vec::Vec;

use super::poly::{factorial, hermite_values};
use super::GaussRule;
use crate::{Error, Result};

pub const DEFAULT_QUADRATURE_ORDER: usize = 80;
/// Relative to the L2 norm of the expanded function.
pub const DEFAULT_RANK_THRESHOLD: f64 = 1e-8;

/// Coefficients of `f = sum_j c_j h_j` under the standard Gaussian law.
///
/// With `E[h_i h_j] = j! delta_ij`, `c_j = E[f(X) h_j(X)] / j!`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoefficients {
    pub coeffs: Vec<f64>,
    pub quadrature_order: usize,
    /// `E f^2 - sum_j c_j^2 j!`, clamped at zero.
    pub residual: f64,
    /// Quadrature estimate of `E f^2`.
    pub second_moment: f64,
}

impl ExpansionCoefficients {
    pub fn max_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `sqrt(E f^2)`.
    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.second_moment)
    }

    /// `|c_j| sqrt(j!)`, the L2 size of the `j`-th term.
    pub fn normalized(&self, j: usize) -> f64 {
        self.coeffs[j].abs() * libm::sqrt(factorial(j))
    }
}

/// Gauss–Hermite expansion with `quad_order` nodes.
pub fn expansion_coeffs(f: impl Fn(f64) -> f64, max_order: usize, quad_order: usize) -> Result<ExpansionCoefficients> {
    if quad_order < max_order + 1 {
        return Err(Error::UndersampledQuadrature {
            nodes: quad_order,
            max_order,
        });
    }
    expansion_coeffs_with(f, max_order, &GaussRule::hermite(quad_order))
}

/// Expansion against an arbitrary Gaussian quadrature rule.
pub fn expansion_coeffs_with(f: impl Fn(f64) -> f64, max_order: usize, rule: &GaussRule) -> Result<ExpansionCoefficients> {
    if rule.len() < max_order + 1 {
        return Err(Error::UndersampledQuadrature {
            nodes: rule.len(),
            max_order,
        });
    }
    let mut h = alloc::vec![0.0; max_order + 1];
    let mut moments = alloc::vec![0.0; max_order + 1];
    let mut second_moment = 0.0;
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::NonFinite { x });
        }
        hermite_values(x, &mut h);
        for (m, hj) in moments.iter_mut().zip(&h) {
            *m += w * fx * hj;
        }
        second_moment += w * fx * fx;
    }
    let coeffs: Vec<f64> = moments
        .iter()
        .enumerate()
        .map(|(j, m)| m / factorial(j))
        .collect();
    let explained: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c * c * factorial(j))
        .sum();
    Ok(ExpansionCoefficients {
        coeffs,
        quadrature_order: rule.len(),
        residual: (second_moment - explained).max(0.0),
        second_moment,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteRank {
    /// `None` when no coefficient up to the expansion order clears the
    /// threshold.
    pub rank: Option<usize>,
    pub threshold: f64,
}

/// Smallest `j` with `|c_j| sqrt(j!) > threshold ||f||`.
pub fn hermite_rank(coeffs: &ExpansionCoefficients, threshold: f64) -> HermiteRank {
    let cut = threshold * coeffs.l2_norm();
    let rank = (0..coeffs.coeffs.len()).find(|&j| coeffs.normalized(j) > cut);
    HermiteRank { rank, threshold }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityAudit {
    pub is_convex_on_grid: bool,
    pub nonzero: bool,
    pub rank: HermiteRank,
    pub expansion: ExpansionCoefficients,
    /// Grid-convex, nonzero, and rank at least 3 (or beyond the expansion).
    pub violation: bool,
}

/// Midpoint test `f((x+y)/2) <= (f(x)+f(y))/2` over all grid pairs.
pub fn is_midpoint_convex(f: impl Fn(f64) -> f64, grid: &[f64]) -> bool {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            let mid = f(0.5 * (grid[i] + grid[j]));
            let chord = 0.5 * (values[i] + values[j]);
            let slack = 1e-12 * (mid.abs() + chord.abs()).max(1.0);
            if mid > chord + slack {
                return false;
            }
        }
    }
    true
}

/// Checks the claim that a nonzero convex `L2` function has Hermite rank at
/// most two: convexity is tested on `grid`, the rank from `rule`.
pub fn convexity_rank_audit(
    f: impl Fn(f64) -> f64,
    grid: &[f64],
    max_order: usize,
    rule: &GaussRule,
    threshold: f64,
) -> Result<ConvexityAudit> {
    if grid.len() < 3 {
        return Err(Error::Config("convexity grid needs at least 3 points"));
    }
    let is_convex_on_grid = is_midpoint_convex(&f, grid);
    let expansion = expansion_coeffs_with(&f, max_order, rule)?;
    let rank = hermite_rank(&expansion, threshold);
    let nonzero = expansion.second_moment > 0.0;
    let high_rank = match rank.rank {
        Some(r) => r >= 3,
        None => max_order >= 2,
    };
    Ok(ConvexityAudit {
        is_convex_on_grid,
        nonzero,
        rank,
        violation: is_convex_on_grid && nonzero && high_rank,
        expansion,
    })
}
