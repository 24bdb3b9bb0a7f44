use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("covariance specification has no lags")]
    EmptySpec,
    #[error(
        "circulant embedding has negative eigenvalue mass {relative_mass:e} (relative), tolerance {tolerance:e}"
    )]
    Embedding { relative_mass: f64, tolerance: f64 },
    #[error("matrix is not positive definite: pivot {pivot:e} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("Cholesky sampler is capped at {cap} points, got {len}")]
    CholeskyCap { len: usize, cap: usize },
    #[error("index {index} out of range for length {len}")]
    Range { index: usize, len: usize },
    #[error("quadrature with {nodes} nodes cannot resolve expansion order {max_order}")]
    UndersampledQuadrature { nodes: usize, max_order: usize },
    #[error("function is not finite at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("invalid partition: {0}")]
    Partition(&'static str),
    #[error("insufficient data: {usable} usable points, need at least {required}")]
    InsufficientData { usable: usize, required: usize },
    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),
}

impl Error {
    /// Errors caused by the data rather than by the caller's parameters.
    pub fn is_statistical(&self) -> bool {
        matches!(
            self,
            Error::InsufficientData { .. }
                | Error::DegenerateFit(_)
                | Error::Embedding { .. }
                | Error::NotPositiveDefinite { .. }
        )
    }

    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
