//! CSV, JSON and binary encodings of experiment results.
//!
//! Numbers are written with Rust's `Debug` float formatting, which is
//! locale-independent and round-trips exactly.
//!
//! # Binary path block (`.hpth`)
//!
//! Little-endian throughout:
//!
//! | offset | size | field                         |
//! |--------|------|-------------------------------|
//! | 0      | 4    | magic `b"HPTH"`               |
//! | 4      | 2    | version, `u16` = 1            |
//! | 6      | 4    | Hermite order `m`, `u32`      |
//! | 10     | 8    | `H`, IEEE-754 `f64`           |
//! | 18     | 8    | points per path `n`, `u64`    |
//! | 26     | 8    | replicas `R`, `u64`           |
//! | 34     | 8nR  | values, `f64`, row-major      |

use std::fmt::Write as _;

use hermite_core::decorrelation::DecorrelationReport;
use hermite_core::persistence::{ExponentFit, PersistenceEstimate, TailCurve};
use hermite_core::process::{DiscretePath, MomentRow};
use hermite_core::stats::Proportion;
use serde::{Deserialize, Serialize};

pub const HPTH_MAGIC: &[u8; 4] = b"HPTH";
pub const HPTH_VERSION: u16 = 1;
pub const HPTH_HEADER_LEN: usize = 34;

fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Long-form CSV `replica,k,value` with `k = 1..n`.
pub fn paths_csv(paths: &[DiscretePath]) -> String {
    let mut s = String::from("replica,k,value\n");
    for (r, path) in paths.iter().enumerate() {
        for (k, v) in path.values.iter().enumerate() {
            let _ = writeln!(s, "{r},{},{}", k + 1, num(*v));
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathBlock {
    pub order: u32,
    pub hurst: f64,
    pub points: u64,
    pub replicas: u64,
    pub values: Vec<f64>,
}

pub fn encode_paths(order: u32, hurst: f64, points: u64, paths: &[DiscretePath]) -> Vec<u8> {
    let mut out = Vec::with_capacity(HPTH_HEADER_LEN + 8 * paths.len() * points as usize);
    out.extend_from_slice(HPTH_MAGIC);
    out.extend_from_slice(&HPTH_VERSION.to_le_bytes());
    out.extend_from_slice(&order.to_le_bytes());
    out.extend_from_slice(&hurst.to_le_bytes());
    out.extend_from_slice(&points.to_le_bytes());
    out.extend_from_slice(&(paths.len() as u64).to_le_bytes());
    for p in paths {
        for v in &p.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DecodeError {
    #[error("not an HPTH block")]
    Magic,
    #[error("unsupported HPTH version {0}")]
    Version(u16),
    #[error("HPTH block truncated or oversized")]
    Length,
}

pub fn decode_paths(bytes: &[u8]) -> Result<PathBlock, DecodeError> {
    if bytes.len() < HPTH_HEADER_LEN {
        return Err(DecodeError::Length);
    }
    if &bytes[..4] != HPTH_MAGIC {
        return Err(DecodeError::Magic);
    }
    let u16_at = |o: usize| u16::from_le_bytes(bytes[o..o + 2].try_into().expect("2 bytes"));
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    let version = u16_at(4);
    if version != HPTH_VERSION {
        return Err(DecodeError::Version(version));
    }
    let order = u32_at(6);
    let hurst = f64::from_bits(u64_at(10));
    let points = u64_at(18);
    let replicas = u64_at(26);
    let body = &bytes[HPTH_HEADER_LEN..];
    let expected = points
        .checked_mul(replicas)
        .and_then(|c| c.checked_mul(8))
        .ok_or(DecodeError::Length)?;
    if body.len() as u64 != expected {
        return Err(DecodeError::Length);
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Ok(PathBlock {
        order,
        hurst,
        points,
        replicas,
        values,
    })
}

pub const PERSISTENCE_HEADER: &str = "T,barrier,survivors,replicas,p_hat,stderr";

pub fn persistence_csv(estimates: &[PersistenceEstimate]) -> String {
    let mut s = format!("{PERSISTENCE_HEADER}\n");
    for e in estimates {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            e.horizon,
            num(e.barrier),
            e.survivors,
            e.replicas,
            num(e.p_hat),
            num(e.stderr)
        );
    }
    s
}

pub fn tail_csv(curve: &TailCurve) -> String {
    let mut s = String::from("u,hits,replicas,tail,stderr\n");
    for p in &curve.points {
        let _ = writeln!(s, "{},{},{},{},{}", num(p.level), p.hits, p.replicas, num(p.tail), num(p.stderr));
    }
    s
}

pub fn moments_csv(rows: &[MomentRow]) -> String {
    let mut s = String::from("n,estimate,stderr,ratio\n");
    for r in rows {
        let ratio = r.ratio.map(num).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{}", r.n, num(r.estimate), num(r.stderr), ratio);
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    #[serde(rename = "T")]
    pub horizon: f64,
    pub p_hat: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentSummary {
    pub barrier: f64,
    pub theta: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub stderr: f64,
    pub reduced_chi2: Option<f64>,
    pub weighted: bool,
    pub grid: Vec<GridRow>,
    pub excluded: Vec<u64>,
}

impl ExponentSummary {
    pub fn new(barrier: f64, fit: &ExponentFit) -> Self {
        Self {
            barrier,
            theta: fit.theta,
            ci_low: fit.ci_low,
            ci_high: fit.ci_high,
            stderr: fit.stderr,
            reduced_chi2: fit.reduced_chi2,
            weighted: fit.weighted,
            grid: fit
                .grid
                .iter()
                .map(|g| GridRow {
                    horizon: g.horizon,
                    p_hat: g.p_hat,
                    stderr: g.stderr,
                })
                .collect(),
            excluded: fit.excluded.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionJson {
    pub p_hat: f64,
    pub stderr: f64,
}

impl From<Proportion> for ProportionJson {
    fn from(p: Proportion) -> Self {
        Self {
            p_hat: p.p_hat,
            stderr: p.stderr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecorrelationJson {
    pub joint: ProportionJson,
    pub marginals: Vec<ProportionJson>,
    pub product: f64,
    pub product_stderr: f64,
    pub margin: f64,
    pub margin_stderr: f64,
    pub z_score: f64,
    pub replicas: u64,
    pub exploratory: bool,
    pub config: serde_json::Value,
}

impl DecorrelationJson {
    pub fn new(report: &DecorrelationReport, config: serde_json::Value) -> Self {
        Self {
            joint: report.joint.into(),
            marginals: report.marginals.iter().map(|&m| m.into()).collect(),
            product: report.product,
            product_stderr: report.product_stderr,
            margin: report.margin,
            margin_stderr: report.margin_stderr,
            z_score: report.z_score,
            replicas: report.replicas,
            exploratory: report.exploratory,
            config,
        }
    }
}
