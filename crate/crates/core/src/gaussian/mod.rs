//! Exact simulation of stationary centered Gaussian sequences.
//!
//! The main route is circulant embedding of the Toeplitz covariance, sampled
//! with one FFT per pair of replicas. A dense Cholesky sampler serves as an
//! independent oracle at small lengths.

mod cholesky;
mod covariance;
mod embedding;
mod empirical;
mod sample;

pub use cholesky::{cholesky_lower, CholeskyFactor, DEFAULT_CHOLESKY_CAP};
pub use covariance::{make_covariance, power_law_lag, CovarianceSpec};
pub use embedding::{circulant_embed, embedding_size, SpectralEmbedding, DEFAULT_CLIP_TOLERANCE};
pub use empirical::{empirical_covariance, position_covariance, LagEstimate};
pub use sample::{cholesky_sample, sample_paths, sample_paths_with, GaussianSample, GaussianSource, Method};
