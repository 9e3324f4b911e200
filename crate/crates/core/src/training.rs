//! Training-data requirement `q(X2; X1)` and its inverse.
//!
//! Any requirement function works with the rest of the crate as long as it
//! is zero for `X2 <= X1`, convex increasing in `X2`, decreasing in `X1` and
//! blows up as `X2 -> 1`.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::params::{DataStock, ModelParams};

/// Data needed to lift quality from `x1` to `x2` under the logarithmic
/// scaling law `(1/k) ln((1 - x1) / (1 - x2))`.
///
/// Returns `+inf` for `x2 >= 1 > x1`.
pub fn q(x2: f64, x1: f64, k: f64) -> f64 {
    if x2 <= x1 {
        0.0
    } else if x2 >= 1.0 {
        f64::INFINITY
    } else {
        // ln_1p keeps precision when x2 is close to x1
        ((x2 - x1) / (1.0 - x2)).ln_1p() / k
    }
}

/// Largest double below 1.
pub const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// Quality reached from `x1` with `data` units: `1 - (1 - x1) exp(-k Q)`.
pub fn q_inverse(data: DataStock, x1: f64, k: f64) -> f64 {
    match data {
        DataStock::Infinite => 1.0,
        // finite data never reaches quality 1, even after rounding
        DataStock::Finite(d) => (1.0 - (1.0 - x1) * (-k * d.max(0.0)).exp()).min(BELOW_ONE.max(x1)),
    }
}

/// Functional form of the requirement function.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Technology {
    #[default]
    Logarithmic,
    /// `((r^a) - 1) / (a k)` with `r = (1 - x1) / (1 - x2)`; tends to the
    /// logarithmic form as `a -> 0`.
    Power { exponent: f64 },
}

impl Technology {
    pub(crate) fn check(&self) -> Result<(), ModelError> {
        match *self {
            Technology::Logarithmic => Ok(()),
            Technology::Power { exponent } if exponent > 0.0 && exponent.is_finite() => Ok(()),
            Technology::Power { .. } => Err(ModelError::Domain("power exponent > 0")),
        }
    }
}

/// A requirement function bound to an efficiency `k`.
pub trait DataRequirement {
    fn requirement(&self, x2: f64, x1: f64) -> f64;
    fn quality_for(&self, data: DataStock, x1: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Training {
    pub technology: Technology,
    pub k: f64,
}

impl Training {
    pub fn of(p: &ModelParams) -> Training {
        Training { technology: p.technology, k: p.k }
    }
}

impl DataRequirement for Training {
    fn requirement(&self, x2: f64, x1: f64) -> f64 {
        match self.technology {
            Technology::Logarithmic => q(x2, x1, self.k),
            Technology::Power { exponent } => {
                if x2 <= x1 {
                    0.0
                } else if x2 >= 1.0 {
                    f64::INFINITY
                } else {
                    let r = (1.0 - x1) / (1.0 - x2);
                    (r.powf(exponent) - 1.0) / (exponent * self.k)
                }
            }
        }
    }

    fn quality_for(&self, data: DataStock, x1: f64) -> f64 {
        match self.technology {
            Technology::Logarithmic => q_inverse(data, x1, self.k),
            Technology::Power { exponent } => match data {
                DataStock::Infinite => 1.0,
                DataStock::Finite(d) => {
                    let r = (1.0 + exponent * self.k * d.max(0.0)).powf(1.0 / exponent);
                    (1.0 - (1.0 - x1) / r).min(BELOW_ONE.max(x1))
                }
            },
        }
    }
}
