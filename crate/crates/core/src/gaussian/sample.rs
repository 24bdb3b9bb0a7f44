use alloc::vec::Vec;
use num_complex::Complex64;

use super::{
    circulant_embed, CholeskyFactor, CovarianceSpec, SpectralEmbedding, DEFAULT_CHOLESKY_CAP,
    DEFAULT_CLIP_TOLERANCE,
};
use crate::{Error, ReplicaExecutor, Result, Sequential};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Circulant,
    Cholesky,
}

/// Either exact sampler, with a uniform per-replica interface.
#[derive(Debug, Clone)]
pub enum GaussianSource {
    Circulant(SpectralEmbedding),
    Cholesky(CholeskyFactor),
}

/// Per-worker buffers for [`GaussianSource`].
#[derive(Debug)]
pub struct SourceScratch {
    complex: Vec<Complex64>,
    normals: Vec<f64>,
    rows: Vec<f64>,
}

impl GaussianSource {
    /// Circulant embedding with the default clip tolerance, falling back to
    /// Cholesky when the embedding is rejected and the length allows it.
    pub fn new(spec: &CovarianceSpec) -> Result<Self> {
        match circulant_embed(spec, DEFAULT_CLIP_TOLERANCE) {
            Ok(emb) => Ok(Self::Circulant(emb)),
            Err(err @ Error::Embedding { .. }) => {
                if spec.len() <= DEFAULT_CHOLESKY_CAP {
                    CholeskyFactor::new(spec, DEFAULT_CHOLESKY_CAP).map(Self::Cholesky)
                } else {
                    Err(err)
                }
            }
            Err(err) => Err(err),
        }
    }

    pub fn spec(&self) -> &CovarianceSpec {
        match self {
            Self::Circulant(e) => e.spec(),
            Self::Cholesky(c) => c.spec(),
        }
    }

    pub fn len(&self) -> usize {
        self.spec().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn method(&self) -> Method {
        match self {
            Self::Circulant(_) => Method::Circulant,
            Self::Cholesky(_) => Method::Cholesky,
        }
    }

    /// Replicas produced per random stream.
    pub fn block_size(&self) -> u64 {
        match self {
            Self::Circulant(_) => 2,
            Self::Cholesky(_) => 1,
        }
    }

    pub fn scratch(&self) -> SourceScratch {
        let n = self.len();
        let (m, z) = match self {
            Self::Circulant(e) => (e.size(), 0),
            Self::Cholesky(_) => (0, n),
        };
        SourceScratch {
            complex: alloc::vec![Complex64::new(0.0, 0.0); m],
            normals: alloc::vec![0.0; z],
            rows: alloc::vec![0.0; 2 * n],
        }
    }

    /// Fills the rows of `block` into `scratch` and returns them.
    pub fn fill_block<'s>(&self, seed: u64, block: u64, scratch: &'s mut SourceScratch) -> &'s [f64] {
        let n = self.len();
        match self {
            Self::Circulant(e) => {
                let (a, b) = scratch.rows.split_at_mut(n);
                e.fill_pair(seed, block, &mut scratch.complex, a, b);
                &scratch.rows[..2 * n]
            }
            Self::Cholesky(c) => {
                c.fill_replica(seed, block, &mut scratch.normals, &mut scratch.rows[..n]);
                &scratch.rows[..n]
            }
        }
    }

    /// Applies `task(user, replica, row)` to replicas `0..replicas` and
    /// returns the results in replica order. Replica `r` is a pure function
    /// of `(seed, r)`.
    pub fn map_replicas<E, U, T, I, F>(&self, exec: &E, replicas: u64, seed: u64, init: I, task: F) -> Vec<T>
    where
        E: ReplicaExecutor + ?Sized,
        T: Send,
        I: Fn() -> U + Sync + Send,
        F: Fn(&mut U, u64, &[f64]) -> T + Sync + Send,
    {
        let n = self.len();
        let bs = self.block_size();
        let blocks = replicas.div_ceil(bs);
        let nested = exec.map_with(
            blocks,
            || (self.scratch(), init()),
            |(scratch, user), block| {
                let rows = self.fill_block(seed, block, scratch);
                let first = block * bs;
                let count = bs.min(replicas - first) as usize;
                rows.chunks_exact(n)
                    .take(count)
                    .enumerate()
                    .map(|(i, row)| task(user, first + i as u64, row))
                    .collect::<Vec<T>>()
            },
        );
        nested.into_iter().flatten().collect()
    }
}

/// `R x n` matrix of sampled sequences, row-major, one replica per row.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSample {
    data: Vec<f64>,
    replicas: usize,
    seed: u64,
    method: Method,
    spec: CovarianceSpec,
}

impl GaussianSample {
    /// Wraps externally produced rows, e.g. deterministic stubs in tests.
    pub fn from_rows(spec: CovarianceSpec, data: Vec<f64>, seed: u64, method: Method) -> Result<Self> {
        let n = spec.len();
        if data.len() % n != 0 {
            return Err(Error::Config("sample data is not a whole number of rows"));
        }
        Ok(Self {
            replicas: data.len() / n,
            data,
            seed,
            method,
            spec,
        })
    }

    pub fn replicas(&self) -> usize {
        self.replicas
    }

    pub fn len(&self) -> usize {
        self.spec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.replicas == 0
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn spec(&self) -> &CovarianceSpec {
        &self.spec
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, replica: usize) -> &[f64] {
        let n = self.len();
        &self.data[replica * n..(replica + 1) * n]
    }

    pub fn rows(&self) -> core::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.len())
    }
}

pub fn sample_paths(embedding: &SpectralEmbedding, replicas: usize, seed: u64) -> GaussianSample {
    sample_paths_with(&Sequential, &GaussianSource::Circulant(embedding.clone()), replicas, seed)
}

pub fn sample_paths_with<E: ReplicaExecutor + ?Sized>(
    exec: &E,
    source: &GaussianSource,
    replicas: usize,
    seed: u64,
) -> GaussianSample {
    let rows = source.map_replicas(exec, replicas as u64, seed, || (), |_, _, row| row.to_vec());
    GaussianSample {
        data: rows.concat(),
        replicas,
        seed,
        method: source.method(),
        spec: source.spec().clone(),
    }
}

pub fn cholesky_sample(spec: &CovarianceSpec, replicas: usize, seed: u64) -> Result<GaussianSample> {
    let source = GaussianSource::Cholesky(CholeskyFactor::new(spec, DEFAULT_CHOLESKY_CAP)?);
    Ok(sample_paths_with(&Sequential, &source, replicas, seed))
}
