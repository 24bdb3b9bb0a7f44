use std::f64::consts::SQRT_2;

use hermite_core::decorrelation::{
    check_decorrelation, check_decorrelation_on, check_discrete_inequality, gci_sanity, tally, ConvexSet,
    PartitionSpec,
};
use hermite_core::gaussian::{sample_paths_with, CovarianceSpec, GaussianSource};
use hermite_core::process::{HermitePathConfig, Normalization, PathModel};
use hermite_core::{Error, Sequential};
use proptest::prelude::*;

fn rosenblatt(h: f64, n: usize) -> HermitePathConfig {
    HermitePathConfig::new(2, h, n, Normalization::EmpiricalUnitVariance).unwrap()
}

#[test]
fn single_block_margin_is_zero() {
    let p = PartitionSpec::new(vec![0, 64], vec![0.4]).unwrap();
    let r = check_decorrelation(&Sequential, &rosenblatt(0.7, 64), &p, 5_000, 1).unwrap();
    assert_eq!(r.margin, 0.0);
    assert_eq!(r.joint.p_hat, r.product);
}

#[test]
fn white_noise_blocks_are_independent() {
    let n = 128;
    let config = HermitePathConfig::new(1, 0.75, n, Normalization::Raw).unwrap();
    let source = GaussianSource::new(&CovarianceSpec::white_noise(n).unwrap()).unwrap();
    let model = PathModel::with_source(config, source).unwrap();
    let p = PartitionSpec::new(vec![0, 40, 90, 128], vec![0.5, 0.8, 0.3]).unwrap();
    let r = check_decorrelation_on(&Sequential, &model, &p, 100_000, 2).unwrap();
    assert!(r.margin.abs() < 3.0 * r.margin_stderr, "{r:?}");
}

#[test]
fn rosenblatt_two_halves() {
    let p = PartitionSpec::from_fractions(256, &[0.0, 0.5, 1.0], vec![0.5, 0.5]).unwrap();
    let r = check_decorrelation(&Sequential, &rosenblatt(0.7, 256), &p, 100_000, 3).unwrap();
    assert!(r.z_score >= -3.0, "{r:?}");
    assert!(!r.exploratory);
}

#[test]
fn higher_orders_are_exploratory() {
    let config = HermitePathConfig::new(3, 0.8, 32, Normalization::EmpiricalUnitVariance).unwrap();
    let p = PartitionSpec::new(vec![0, 16, 32], vec![0.5, 0.5]).unwrap();
    assert!(check_decorrelation(&Sequential, &config, &p, 100, 4).unwrap().exploratory);
}

#[test]
fn discrete_inequality() {
    let spec = CovarianceSpec::power_law(0.3, 64).unwrap();
    let driver = sample_paths_with(&Sequential, &GaussianSource::new(&spec).unwrap(), 100_000, 5);
    let four = PartitionSpec::new(vec![0, 16, 32, 48, 64], vec![2.0; 4]).unwrap();
    let r = check_discrete_inequality(&driver, &four, 2).unwrap();
    assert!(r.z_score >= -3.0, "{r:?}");

    let one = PartitionSpec::new(vec![0, 64], vec![2.0]).unwrap();
    assert_eq!(check_discrete_inequality(&driver, &one, 2).unwrap().margin, 0.0);

    let free = PartitionSpec::new(vec![0, 32, 64], vec![f64::INFINITY; 2]).unwrap();
    let r = check_discrete_inequality(&driver, &free, 2).unwrap();
    assert_eq!((r.joint.p_hat, r.product), (1.0, 1.0));
}

#[test]
fn partition_validation() {
    assert!(matches!(PartitionSpec::new(vec![0, 4, 4], vec![1.0, 1.0]), Err(Error::Partition(_))));
    assert!(matches!(PartitionSpec::new(vec![0], vec![]), Err(Error::Partition(_))));
    assert!(matches!(PartitionSpec::new(vec![0, 4], vec![1.0, 2.0]), Err(Error::Partition(_))));
    let p = PartitionSpec::new(vec![0, 100], vec![1.0]).unwrap();
    assert!(check_decorrelation(&Sequential, &rosenblatt(0.7, 50), &p, 10, 1).is_err());
}

#[test]
fn tally_by_hand() {
    // Events 0 and 1 over five replicas.
    let masks = [0b11, 0b01, 0b10, 0b11, 0b00];
    let r = tally(&masks, 2, false);
    assert_eq!(r.joint.p_hat, 0.4);
    assert_eq!(r.marginals[0].p_hat, 0.6);
    assert_eq!(r.marginals[1].p_hat, 0.6);
    assert!((r.product - 0.36).abs() < 1e-15);
    assert!((r.margin - 0.04).abs() < 1e-15);
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / SQRT_2))
}

#[test]
fn gci_independent_components() {
    let cov = [1.0, 0.0, 0.0, 1.0];
    let sets = [
        ConvexSet::Box { half_widths: vec![0.7, f64::INFINITY] },
        ConvexSet::Box { half_widths: vec![f64::INFINITY, 1.2] },
    ];
    let r = gci_sanity(&Sequential, 2, &cov, &sets, 200_000, 6).unwrap();
    assert!(r.margin.abs() < 3.0 * r.margin_stderr);
    let want = 2.0 * normal_cdf(0.7) - 1.0;
    assert!((r.marginals[0].p_hat - want).abs() < 4.0 * r.marginals[0].stderr);
}

#[test]
fn gci_ball_and_box_in_three_dimensions() {
    let rho: f64 = 0.5;
    let mut cov = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            cov[i * 3 + j] = rho.powi((i as i32 - j as i32).abs());
        }
    }
    let sets = [
        ConvexSet::Ball { radius: 1.5, coords: vec![0, 1] },
        ConvexSet::Box { half_widths: vec![f64::INFINITY, 1.0, 0.8] },
    ];
    let r = gci_sanity(&Sequential, 3, &cov, &sets, 200_000, 7).unwrap();
    assert!(r.z_score >= -3.0);
}

#[test]
fn gci_rejects_bad_input() {
    let sets = [ConvexSet::Box { half_widths: vec![1.0, 1.0] }];
    assert!(gci_sanity(&Sequential, 2, &[1.0, 2.0, 2.0, 1.0], &sets, 10, 1).is_err());
    assert!(gci_sanity(&Sequential, 5, &[1.0; 25], &sets, 10, 1).is_err());
}

proptest! {
    #[test]
    fn tally_identities(masks in prop::collection::vec(0u64..16, 1..200)) {
        let r = tally(&masks, 4, false);
        let min = r.marginals.iter().map(|m| m.p_hat).fold(1.0, f64::min);
        prop_assert!(r.product <= min + 1e-15);
        prop_assert!(r.joint.p_hat <= min);
        prop_assert!((r.margin - (r.joint.p_hat - r.product)).abs() < 1e-15);
        prop_assert!(r.margin_stderr >= 0.0);
        if r.margin_stderr > 0.0 {
            prop_assert!((r.z_score - r.margin / r.margin_stderr).abs() < 1e-9 * r.z_score.abs().max(1.0));
        }
        let direct = masks.iter().filter(|&&m| m == 15).count() as f64 / masks.len() as f64;
        prop_assert_eq!(r.joint.p_hat, direct);
    }
}
