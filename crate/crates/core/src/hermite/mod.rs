//! Probabilists' Hermite polynomials, Gaussian expansions and Hermite rank.

mod expansion;
mod functions;
mod poly;
mod quadrature;

pub use expansion::{
    convexity_rank_audit, expansion_coeffs, expansion_coeffs_with, hermite_rank, is_midpoint_convex,
    ConvexityAudit, ExpansionCoefficients, HermiteRank, DEFAULT_QUADRATURE_ORDER, DEFAULT_RANK_THRESHOLD,
};
pub use functions::BuiltinFunction;
pub use poly::{factorial, hermite_eval, hermite_values};
pub use quadrature::GaussRule;
