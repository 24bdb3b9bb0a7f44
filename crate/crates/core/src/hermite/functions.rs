use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{hermite_eval, GaussRule, DEFAULT_QUADRATURE_ORDER};

/// Named test functions for expansions and rank audits.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinFunction {
    Abs,
    /// `|x| - E|X|`
    AbsCentered,
    Relu,
    Square,
    /// `exp(x) - e^{1/2}`
    ExpCentered,
    H3,
    H4,
    /// `x^4 - 3`
    QuarticCentered,
    /// `sum_k a_k x^k`, coefficients in increasing degree.
    Polynomial(Vec<f64>),
}

impl BuiltinFunction {
    pub const NAMES: [&'static str; 9] = [
        "abs",
        "abs-centered",
        "relu",
        "square",
        "exp-centered",
        "h3",
        "h4",
        "quartic-centered",
        "custom-polynomial",
    ];

    /// Looks up a registry name. `custom-polynomial` takes `coefficients`.
    pub fn from_name(name: &str, coefficients: &[f64]) -> Option<Self> {
        Some(match name {
            "abs" => Self::Abs,
            "abs-centered" => Self::AbsCentered,
            "relu" => Self::Relu,
            "square" => Self::Square,
            "exp-centered" => Self::ExpCentered,
            "h3" => Self::H3,
            "h4" => Self::H4,
            "quartic-centered" => Self::QuarticCentered,
            "custom-polynomial" if !coefficients.is_empty() => Self::Polynomial(coefficients.to_vec()),
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Abs => "abs",
            Self::AbsCentered => "abs-centered",
            Self::Relu => "relu",
            Self::Square => "square",
            Self::ExpCentered => "exp-centered",
            Self::H3 => "h3",
            Self::H4 => "h4",
            Self::QuarticCentered => "quartic-centered",
            Self::Polynomial(_) => "custom-polynomial",
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Abs => x.abs(),
            Self::AbsCentered => x.abs() - libm::sqrt(2.0 / PI),
            Self::Relu => x.max(0.0),
            Self::Square => x * x,
            Self::ExpCentered => libm::exp(x) - libm::exp(0.5),
            Self::H3 => hermite_eval(3, x),
            Self::H4 => hermite_eval(4, x),
            Self::QuarticCentered => x * x * x * x - 3.0,
            Self::Polynomial(a) => a.iter().rev().fold(0.0, |acc, c| acc * x + c),
        }
    }

    /// Points where the function is not smooth.
    pub fn kinks(&self) -> &'static [f64] {
        match self {
            Self::Abs | Self::AbsCentered | Self::Relu => &[0.0],
            _ => &[],
        }
    }

    /// Gauss–Hermite for smooth functions, a breakpoint rule otherwise.
    pub fn quadrature(&self) -> GaussRule {
        if self.kinks().is_empty() {
            GaussRule::hermite(DEFAULT_QUADRATURE_ORDER)
        } else {
            GaussRule::with_breakpoints(self.kinks())
        }
    }
}
