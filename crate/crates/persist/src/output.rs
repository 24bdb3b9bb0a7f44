//! Result files staged in memory and written together.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::manifest::{OutputDigest, RunManifest};

/// Files of one run. Nothing touches the disk until [`OutputSet::commit`];
/// if a write fails midway, files already written are removed again.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<(String, Vec<u8>)>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl OutputSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, b)| b.as_slice())
    }

    pub fn digests(&self) -> Vec<OutputDigest> {
        self.files
            .iter()
            .map(|(name, bytes)| OutputDigest {
                file: name.clone(),
                sha256: sha256_hex(bytes),
                bytes: bytes.len() as u64,
            })
            .collect()
    }

    /// Writes every file and then `manifest_name` into `dir`.
    pub fn commit(self, dir: &Path, manifest_name: &str, mut manifest: RunManifest) -> io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        manifest.outputs = self.digests();
        let manifest_bytes = serde_json::to_vec_pretty(&manifest).map_err(io::Error::other)?;
        let mut written = Vec::new();
        let all = self
            .files
            .iter()
            .map(|(n, b)| (n.as_str(), b.as_slice()))
            .chain(std::iter::once((manifest_name, manifest_bytes.as_slice())));
        for (name, bytes) in all {
            let path = dir.join(name);
            if let Err(e) = fs::write(&path, bytes) {
                for p in &written {
                    let _ = fs::remove_file(p);
                }
                let _ = fs::remove_file(&path);
                return Err(e);
            }
            written.push(path);
        }
        Ok(written)
    }
}
