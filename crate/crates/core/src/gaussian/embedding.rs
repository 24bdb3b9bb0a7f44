use alloc::vec::Vec;
use num_complex::Complex64;

use super::CovarianceSpec;
use crate::fft::FftPlan;
use crate::rng::{self, Domain};
use crate::{Error, Result};

/// Relative negative-eigenvalue mass that may be clipped silently.
pub const DEFAULT_CLIP_TOLERANCE: f64 = 1e-8;

/// Smallest power of two that is at least `2 (n - 1)`.
pub fn embedding_size(n: usize) -> usize {
    (2 * n.saturating_sub(1)).max(1).next_power_of_two()
}

/// Spectrum of the even circulant extension of a Toeplitz covariance.
#[derive(Debug, Clone)]
pub struct SpectralEmbedding {
    spec: CovarianceSpec,
    eigenvalues: Vec<f64>,
    clip_mass: f64,
    abs_mass: f64,
    raw_sum: f64,
    // sqrt(lambda_k / M)
    amplitudes: Vec<f64>,
    plan: FftPlan,
}

/// Builds the circulant embedding of `spec`.
///
/// The first row is `c_j = r(min(j, M - j))` with `M = embedding_size(n)`;
/// lags past the stored length come from [`CovarianceSpec::lag`]. Negative
/// eigenvalues are clipped to zero if their total mass relative to
/// `sum |lambda|` is at most `tolerance`.
pub fn circulant_embed(spec: &CovarianceSpec, tolerance: f64) -> Result<SpectralEmbedding> {
    if !(tolerance >= 0.0) {
        return Err(Error::domain("tolerance", tolerance, "[0, inf)"));
    }
    let size = embedding_size(spec.len());
    let plan = FftPlan::new(size);
    let mut row: Vec<Complex64> = (0..size)
        .map(|j| Complex64::new(spec.lag(j.min(size - j)), 0.0))
        .collect();
    plan.forward(&mut row);
    let mut eigenvalues: Vec<f64> = row.iter().map(|z| z.re).collect();

    let raw_sum: f64 = eigenvalues.iter().sum();
    let abs_mass: f64 = eigenvalues.iter().map(|l| l.abs()).sum();
    let clip_mass: f64 = eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
    let relative_mass = if abs_mass > 0.0 { clip_mass / abs_mass } else { 0.0 };
    if relative_mass > tolerance {
        return Err(Error::Embedding {
            relative_mass,
            tolerance,
        });
    }
    for l in &mut eigenvalues {
        *l = l.max(0.0);
    }
    let amplitudes = eigenvalues
        .iter()
        .map(|l| libm::sqrt(l / size as f64))
        .collect();
    Ok(SpectralEmbedding {
        spec: spec.clone(),
        eigenvalues,
        clip_mass,
        abs_mass,
        raw_sum,
        amplitudes,
        plan,
    })
}

impl SpectralEmbedding {
    pub fn spec(&self) -> &CovarianceSpec {
        &self.spec
    }

    /// Embedding length `M`.
    pub fn size(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Clipped eigenvalues, all nonnegative.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Total negative-eigenvalue mass removed.
    pub fn clip_mass(&self) -> f64 {
        self.clip_mass
    }

    pub fn relative_clip_mass(&self) -> f64 {
        if self.abs_mass > 0.0 {
            self.clip_mass / self.abs_mass
        } else {
            0.0
        }
    }

    /// Sum of the eigenvalues before clipping; equals `M r(0)`.
    pub fn unclipped_sum(&self) -> f64 {
        self.raw_sum
    }

    /// Fills two independent replicas from the stream of `pair`.
    ///
    /// With `W_k = sqrt(lambda_k / M) (xi_k + i eta_k)` and `Y = FFT(W)`, the
    /// real and imaginary parts of `Y_0..Y_{n-1}` are independent draws with
    /// the target covariance.
    pub fn fill_pair(&self, seed: u64, pair: u64, buf: &mut [Complex64], first: &mut [f64], second: &mut [f64]) {
        let n = self.spec.len();
        let mut rng = rng::stream(seed, Domain::Circulant, pair);
        for (w, &a) in buf.iter_mut().zip(&self.amplitudes) {
            let re = rng::standard_normal(&mut rng);
            let im = rng::standard_normal(&mut rng);
            *w = Complex64::new(a * re, a * im);
        }
        self.plan.forward(buf);
        for (j, z) in buf[..n].iter().enumerate() {
            first[j] = z.re;
            second[j] = z.im;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::make_covariance;
    use super::*;

    #[test]
    fn embedding_sizes() {
        assert_eq!(embedding_size(1), 1);
        assert_eq!(embedding_size(2), 2);
        assert_eq!(embedding_size(3), 4);
        assert_eq!(embedding_size(64), 128);
        assert_eq!(embedding_size(65), 128);
        assert_eq!(embedding_size(66), 256);
    }

    #[test]
    fn white_noise_spectrum_is_flat() {
        let emb = circulant_embed(&CovarianceSpec::white_noise(33).unwrap(), 0.0).unwrap();
        assert_eq!(emb.size(), 64);
        assert!(emb.eigenvalues().iter().all(|&l| (l - 1.0).abs() < 1e-12));
        assert_eq!(emb.clip_mass(), 0.0);
    }

    #[test]
    fn two_point_spectrum_by_hand() {
        let spec = make_covariance(0.3, 2).unwrap();
        let emb = circulant_embed(&spec, 0.0).unwrap();
        let r1 = libm::pow(2.0, -0.15);
        assert!((emb.eigenvalues()[0] - (1.0 + r1)).abs() < 1e-15);
        assert!((emb.eigenvalues()[1] - (1.0 - r1)).abs() < 1e-15);
        assert!((emb.eigenvalues()[0] - 1.901_250).abs() < 1e-6);
        assert!((emb.eigenvalues()[1] - 0.098_750).abs() < 1e-6);
    }

    #[test]
    fn power_law_embeds_at_desk_scale() {
        for (alpha, n) in [(0.3, 256), (0.15, 4096), (0.6, 1000), (0.1333, 16384)] {
            let emb = circulant_embed(&make_covariance(alpha, n).unwrap(), DEFAULT_CLIP_TOLERANCE).unwrap();
            assert!(emb.relative_clip_mass() <= DEFAULT_CLIP_TOLERANCE);
            assert!(emb.eigenvalues().iter().all(|&l| l >= 0.0));
            let mean = emb.unclipped_sum() / emb.size() as f64;
            assert!((mean - 1.0).abs() < 1e-12, "trace identity {mean}");
        }
    }

    #[test]
    fn indefinite_spec_is_rejected() {
        let spec = CovarianceSpec::from_values(alloc::vec![1.0, 1.5, 0.2]).unwrap();
        assert!(matches!(circulant_embed(&spec, 1e-8), Err(Error::Embedding { .. })));
    }
}
