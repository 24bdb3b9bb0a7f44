use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::output::sha256_hex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Provenance record written next to every run's outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub config: serde_json::Value,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    /// Seconds spent per phase, keyed by module.
    pub timings: BTreeMap<String, f64>,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    /// Checks that every listed output exists in `dir` with the recorded
    /// digest and size.
    pub fn verify(&self, dir: &Path) -> io::Result<bool> {
        for out in &self.outputs {
            let bytes = fs::read(dir.join(&out.file))?;
            if bytes.len() as u64 != out.bytes || sha256_hex(&bytes) != out.sha256 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn load(path: &Path) -> io::Result<Self> {
        let bytes = fs::read(path)?;
        serde_json::from_slice(&bytes).map_err(io::Error::other)
    }
}
