use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

/// Quadrature rule for expectations under the standard Gaussian law:
/// `E f(X) ~ sum_i w_i f(x_i)` with `sum_i w_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

const NEWTON_MAX_ITER: usize = 100;

impl GaussRule {
    /// `order`-point Gauss–Hermite rule, exact for polynomials of degree
    /// below `2 order`.
    ///
    /// Roots of the physicists' polynomial are found by Newton iteration on
    /// the orthonormal recurrence, then mapped with `x = sqrt(2) t` and
    /// `w = w_t / sqrt(pi)`.
    pub fn hermite(order: usize) -> Self {
        assert!(order >= 1);
        let n = order;
        let pim4 = libm::pow(PI, -0.25);
        let mut t = alloc::vec![0.0; n];
        let mut wt = alloc::vec![0.0; n];
        let mut z = 0.0f64;
        for i in 0..n.div_ceil(2) {
            z = match i {
                0 => libm::sqrt((2 * n + 1) as f64) - 1.85575 * libm::pow((2 * n + 1) as f64, -0.16667),
                1 => z - 1.14 * libm::pow(n as f64, 0.426) / z,
                2 => 1.86 * z - 0.86 * t[0],
                3 => 1.91 * z - 0.91 * t[1],
                _ => 2.0 * z - t[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..NEWTON_MAX_ITER {
                let (mut p1, mut p2) = (pim4, 0.0);
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = z * libm::sqrt(2.0 / j as f64) * p2 - libm::sqrt((j - 1) as f64 / j as f64) * p3;
                }
                pp = libm::sqrt(2.0 * n as f64) * p2;
                let step = p1 / pp;
                z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            t[i] = z;
            t[n - 1 - i] = -z;
            wt[i] = 2.0 / (pp * pp);
            wt[n - 1 - i] = wt[i];
        }
        let scale = 1.0 / libm::sqrt(PI);
        Self {
            nodes: t.iter().rev().map(|t| SQRT_2 * t).collect(),
            weights: wt.iter().rev().map(|w| w * scale).collect(),
        }
    }

    /// Composite Gauss–Legendre rule against the Gaussian density on
    /// `[-half_width, half_width]`, with panel edges at every breakpoint.
    ///
    /// Intended for integrands with kinks: between breakpoints the integrand
    /// is smooth and each panel converges geometrically.
    pub fn piecewise(breakpoints: &[f64], half_width: f64, panel_width: f64, points: usize) -> Self {
        let mut edges: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|b| b.abs() < half_width)
            .collect();
        edges.push(-half_width);
        edges.push(half_width);
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        let (gl_nodes, gl_weights) = gauss_legendre(points);
        let norm = 1.0 / libm::sqrt(2.0 * PI);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for seg in edges.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let panels = libm::ceil((b - a) / panel_width).max(1.0) as usize;
            let h = (b - a) / panels as f64;
            for p in 0..panels {
                let lo = a + p as f64 * h;
                for (u, w) in gl_nodes.iter().zip(&gl_weights) {
                    let x = lo + 0.5 * h * (u + 1.0);
                    nodes.push(x);
                    weights.push(0.5 * h * w * norm * libm::exp(-0.5 * x * x));
                }
            }
        }
        Self { nodes, weights }
    }

    /// Piecewise rule with defaults that resolve integrands of polynomial
    /// growth to near machine precision.
    pub fn with_breakpoints(breakpoints: &[f64]) -> Self {
        Self::piecewise(breakpoints, 14.0, 0.5, 20)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, w)| w * f(x)).sum()
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut pp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let step = p1 / pp;
            z -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn double_factorial(k: usize) -> f64 {
        (1..=k).rev().step_by(2).fold(1.0, |a, j| a * j as f64)
    }

    #[test]
    fn hermite_rule_reproduces_gaussian_moments() {
        for order in [1usize, 2, 5, 20, 40, 80] {
            let rule = GaussRule::hermite(order);
            assert_eq!(rule.len(), order);
            assert!((rule.weights().iter().sum::<f64>() - 1.0).abs() < 1e-13, "order {order}");
            for k in 0..order.min(8) {
                let m = rule.expect(|x| x.powi(2 * k as i32));
                let exact = if k == 0 { 1.0 } else { double_factorial(2 * k - 1) };
                assert!((m - exact).abs() < 1e-11 * exact, "order {order}, moment {}", 2 * k);
            }
            assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(7);
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((integral - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn piecewise_rule_handles_kinks() {
        let rule = GaussRule::with_breakpoints(&[0.0]);
        let e_abs = rule.expect(f64::abs);
        assert!((e_abs - libm::sqrt(2.0 / PI)).abs() < 1e-14);
        assert!((rule.expect(|x| x * x) - 1.0).abs() < 1e-14);
    }
}
