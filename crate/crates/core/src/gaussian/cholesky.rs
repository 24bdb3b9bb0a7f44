use alloc::vec::Vec;

use super::CovarianceSpec;
use crate::rng::{self, Domain};
use crate::{Error, Result};

pub const DEFAULT_CHOLESKY_CAP: usize = 2048;

/// Lower Cholesky factor of a dense symmetric `n x n` matrix (row-major).
pub fn cholesky_lower(matrix: &[f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(matrix.len(), n * n);
    let mut l = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let dot: f64 = (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum();
            let v = matrix[i * n + j] - dot;
            if i == j {
                if !(v > 0.0) {
                    return Err(Error::NotPositiveDefinite { row: i, pivot: v });
                }
                l[i * n + i] = libm::sqrt(v);
            } else {
                l[i * n + j] = v / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Factored Toeplitz covariance, ready for sampling.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    spec: CovarianceSpec,
    lower: Vec<f64>,
}

impl CholeskyFactor {
    pub fn new(spec: &CovarianceSpec, cap: usize) -> Result<Self> {
        let n = spec.len();
        if n > cap {
            return Err(Error::CholeskyCap { len: n, cap });
        }
        let lower = cholesky_lower(&spec.toeplitz(), n)?;
        Ok(Self {
            spec: spec.clone(),
            lower,
        })
    }

    pub fn spec(&self) -> &CovarianceSpec {
        &self.spec
    }

    /// Writes replica `replica` of the sample keyed by `seed` into `out`.
    pub fn fill_replica(&self, seed: u64, replica: u64, z: &mut [f64], out: &mut [f64]) {
        let n = self.spec.len();
        let mut rng = rng::stream(seed, Domain::Cholesky, replica);
        rng::fill_standard_normal(&mut rng, &mut z[..n]);
        for i in 0..n {
            let row = &self.lower[i * n..i * n + i + 1];
            out[i] = row.iter().zip(&z[..=i]).map(|(a, b)| a * b).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_matrix() {
        let m = [4.0, 2.0, 2.0, 3.0];
        let l = cholesky_lower(&m, 2).unwrap();
        assert_eq!(l, alloc::vec![2.0, 0.0, 1.0, libm::sqrt(2.0)]);
    }

    #[test]
    fn reports_failing_pivot() {
        let spec = CovarianceSpec::from_values(alloc::vec![1.0, 1.5]).unwrap();
        match CholeskyFactor::new(&spec, DEFAULT_CHOLESKY_CAP) {
            Err(Error::NotPositiveDefinite { row, pivot }) => {
                assert_eq!(row, 1);
                assert!((pivot - (1.0 - 2.25)).abs() < 1e-12);
            }
            other => panic!("expected factorization failure, got {other:?}"),
        }
    }

    #[test]
    fn enforces_cap() {
        let spec = CovarianceSpec::white_noise(10).unwrap();
        assert_eq!(
            CholeskyFactor::new(&spec, 8).unwrap_err(),
            Error::CholeskyCap { len: 10, cap: 8 }
        );
    }
}
