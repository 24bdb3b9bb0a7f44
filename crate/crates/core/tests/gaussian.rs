use hermite_core::gaussian::{
    circulant_embed, cholesky_lower, cholesky_sample, embedding_size, position_covariance, sample_paths, sample_paths_with,
    CovarianceSpec, GaussianSource, Method, DEFAULT_CLIP_TOLERANCE,
};
use hermite_core::{Error, Sequential};
use proptest::prelude::*;

fn r(alpha: f64, j: usize) -> f64 {
    (1.0 + (j * j) as f64).powf(-alpha / 2.0)
}

/// Eigenvalues of the circulant with first row `c`, by a direct cosine sum.
fn circulant_spectrum(c: &[f64]) -> Vec<f64> {
    let m = c.len();
    (0..m)
        .map(|k| {
            c.iter()
                .enumerate()
                .map(|(j, v)| v * (2.0 * std::f64::consts::PI * (j * k) as f64 / m as f64).cos())
                .sum()
        })
        .collect()
}

#[test]
fn spectrum_matches_direct_sum() {
    let (alpha, n) = (0.3, 20);
    let emb = circulant_embed(&CovarianceSpec::power_law(alpha, n).unwrap(), DEFAULT_CLIP_TOLERANCE).unwrap();
    let m = emb.size();
    assert_eq!(m, 64);
    let row: Vec<f64> = (0..m).map(|j| r(alpha, j.min(m - j))).collect();
    let want = circulant_spectrum(&row);
    for (got, want) in emb.eigenvalues().iter().zip(&want) {
        assert!((got - want.max(0.0)).abs() < 1e-10, "{got} vs {want}");
    }
}

#[test]
fn desk_scale_power_laws_embed_cleanly() {
    for (alpha, n) in [(0.3, 256), (0.6, 1000), (0.1, 4096)] {
        let emb = circulant_embed(&CovarianceSpec::power_law(alpha, n).unwrap(), DEFAULT_CLIP_TOLERANCE).unwrap();
        assert!(emb.relative_clip_mass() <= DEFAULT_CLIP_TOLERANCE);
        assert!((emb.unclipped_sum() / emb.size() as f64 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn short_specs_fall_back_to_cholesky() {
    // Minimal embedding of length 4 has eigenvalue 1 - 2 r(1) + r(2) < 0.
    let spec = CovarianceSpec::power_law(0.3, 3).unwrap();
    assert!(matches!(
        circulant_embed(&spec, DEFAULT_CLIP_TOLERANCE),
        Err(Error::Embedding { .. })
    ));
    assert_eq!(GaussianSource::new(&spec).unwrap().method(), Method::Cholesky);
}

#[test]
fn non_psd_custom_spec_is_rejected() {
    let spec = CovarianceSpec::from_values(vec![1.0, 0.9, -0.9, 0.9]).unwrap();
    assert!(matches!(
        circulant_embed(&spec, DEFAULT_CLIP_TOLERANCE),
        Err(Error::Embedding { .. })
    ));
    assert!(matches!(
        cholesky_lower(&spec.toeplitz(), 4),
        Err(Error::NotPositiveDefinite { .. })
    ));
}

#[test]
fn stationarity_of_circulant_sample() {
    let (alpha, n) = (0.3, 48);
    let sample = sample_paths(
        &circulant_embed(&CovarianceSpec::power_law(alpha, n).unwrap(), DEFAULT_CLIP_TOLERANCE).unwrap(),
        40_000,
        11,
    );
    for (i, j) in [(0, 0), (10, 13), (20, 40), (47, 47), (1, 47), (30, 31)] {
        let est = position_covariance(&sample, i, j).unwrap();
        let want = r(alpha, j - i);
        assert!((est.estimate - want).abs() < 5.0 * est.stderr, "({i},{j}) {est:?} vs {want}");
    }
}

#[test]
fn cholesky_oracle_matches_circulant_covariance() {
    let (alpha, n, reps) = (0.5, 12, 40_000);
    let spec = CovarianceSpec::power_law(alpha, n).unwrap();
    let chol = cholesky_sample(&spec, reps, 5).unwrap();
    let circ = sample_paths(&circulant_embed(&spec, DEFAULT_CLIP_TOLERANCE).unwrap(), reps, 5);
    for i in 0..n {
        for j in i..n {
            let a = position_covariance(&chol, i, j).unwrap();
            let b = position_covariance(&circ, i, j).unwrap();
            let se = a.stderr.hypot(b.stderr);
            assert!((a.estimate - b.estimate).abs() < 5.0 * se, "({i},{j})");
        }
    }
}

#[test]
fn cholesky_reproduces_toeplitz() {
    let spec = CovarianceSpec::power_law(0.3, 9).unwrap();
    let t = spec.toeplitz();
    let l = cholesky_lower(&t, 9).unwrap();
    for i in 0..9 {
        for j in 0..9 {
            let s: f64 = (0..9).map(|k| l[i * 9 + k] * l[j * 9 + k]).sum();
            assert!((s - r(0.3, i.abs_diff(j))).abs() < 1e-12);
        }
    }
}

#[test]
fn white_noise_is_uncorrelated() {
    let spec = CovarianceSpec::white_noise(16).unwrap();
    let sample = sample_paths(&circulant_embed(&spec, DEFAULT_CLIP_TOLERANCE).unwrap(), 20_000, 3);
    for j in 1..16 {
        let est = position_covariance(&sample, 0, j).unwrap();
        assert!(est.estimate.abs() < 5.0 * est.stderr);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn embedding_size_is_smallest_power_of_two(n in 1usize..5000) {
        let m = embedding_size(n);
        prop_assert!(m.is_power_of_two());
        prop_assert!(m >= 2 * (n.max(1) - 1));
        prop_assert!(m == 1 || m / 2 < 2 * (n - 1));
    }

    #[test]
    fn eigenvalues_sum_to_size(alpha in 0.05f64..1.0, n in 2usize..600) {
        let emb = circulant_embed(&CovarianceSpec::power_law(alpha, n).unwrap(), 1.0).unwrap();
        prop_assert!((emb.unclipped_sum() / emb.size() as f64 - 1.0).abs() < 1e-10);
        prop_assert!(emb.eigenvalues().iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn samples_are_pure_functions_of_seed(seed in any::<u64>(), n in 1usize..40) {
        let source = GaussianSource::new(&CovarianceSpec::power_law(0.3, n).unwrap()).unwrap();
        let draw = |replicas, seed| sample_paths_with(&Sequential, &source, replicas, seed);
        let a = draw(5, seed);
        let b = draw(5, seed);
        prop_assert_eq!(a.data(), b.data());
        // A longer run extends a shorter one replica by replica.
        let c = draw(3, seed);
        prop_assert_eq!(&a.data()[..3 * n], c.data());
        let d = draw(5, seed.wrapping_add(1));
        prop_assert_ne!(a.data(), d.data());
    }

    #[test]
    fn covariance_is_positive_and_decreasing(alpha in 0.01f64..0.99, n in 2usize..200) {
        let spec = CovarianceSpec::power_law(alpha, n).unwrap();
        prop_assert_eq!(spec.lag(0), 1.0);
        for j in 1..n + 10 {
            prop_assert!(spec.lag(j) > 0.0);
            prop_assert!(spec.lag(j) < spec.lag(j - 1));
            prop_assert!((spec.lag(j) - r(alpha, j)).abs() < 1e-15);
        }
    }
}
