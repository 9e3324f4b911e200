//! Model primitives and their admissibility checks.
//!
//! All monetary quantities are measured in units of the consumption value of
//! one high-quality work, so the low-quality value is zero and the
//! high-quality value is one.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::training::Technology;

/// Stock of pre-existing training content that was never used on the
/// initial model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataStock {
    Finite(f64),
    /// Data-abundant limit: the firm never has to touch newly created work.
    Infinite,
}

impl DataStock {
    pub fn is_infinite(self) -> bool {
        matches!(self, DataStock::Infinite)
    }

    /// `self + extra`, staying infinite when the stock is.
    pub fn plus(self, extra: f64) -> DataStock {
        match self {
            DataStock::Finite(q) => DataStock::Finite(q + extra),
            DataStock::Infinite => DataStock::Infinite,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            DataStock::Finite(q) => q,
            DataStock::Infinite => f64::INFINITY,
        }
    }

    /// Parses `inf`/`infinite` or a nonnegative number.
    pub fn parse(s: &str) -> Option<DataStock> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "inf" | "infinite" | "infinity" => Some(DataStock::Infinite),
            _ => t.parse::<f64>().ok().map(|v| {
                if v.is_infinite() {
                    DataStock::Infinite
                } else {
                    DataStock::Finite(v)
                }
            }),
        }
    }
}

impl fmt::Display for DataStock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataStock::Finite(q) => write!(f, "{q}"),
            DataStock::Infinite => f.write_str("inf"),
        }
    }
}

/// Pre-existing data regime used by the policy experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `Q0 = inf`
    Abundant,
    /// `Q0 = 0`
    Scarce,
}

impl Regime {
    pub fn data_stock(self) -> DataStock {
        match self {
            Regime::Abundant => DataStock::Infinite,
            Regime::Scarce => DataStock::Finite(0.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Abundant => "abundant",
            Regime::Scarce => "scarce",
        }
    }

    pub fn parse(s: &str) -> Option<Regime> {
        match s.trim().to_ascii_lowercase().as_str() {
            "abundant" => Some(Regime::Abundant),
            "scarce" => Some(Regime::Scarce),
            _ => None,
        }
    }
}

pub const DEFAULT_PHI_MIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Fee per unit of training content (fair use standard); 0 is generous.
    pub f: f64,
    /// AI-copyrightability.
    pub phi: f64,
    pub phi_min: f64,
    /// Share of consumption value a copyright holder can monetize.
    pub beta: f64,
    pub c_h: f64,
    pub c_a: f64,
    /// Degree of automation.
    pub lambda: f64,
    /// Period-2 creator mass (Period-1 mass is 1).
    pub m: f64,
    /// Training efficiency.
    pub k: f64,
    pub x1: f64,
    pub q0: DataStock,
    #[serde(default)]
    pub technology: Technology,
}

impl ModelParams {
    /// Parameters shared by the figure experiments:
    /// `c_H = 0.3, c_A = 0.05, lambda = 0.6, beta = 0.6, M = 2, k = 5,
    /// X1 = 0.4, phi = 0.6, f = 0.2`.
    pub fn paper(regime: Regime) -> ModelParams {
        ModelParams {
            f: 0.2,
            phi: 0.6,
            phi_min: DEFAULT_PHI_MIN,
            beta: 0.6,
            c_h: 0.3,
            c_a: 0.05,
            lambda: 0.6,
            m: 2.0,
            k: 5.0,
            x1: 0.4,
            q0: regime.data_stock(),
            technology: Technology::Logarithmic,
        }
    }

    pub fn with_regime(mut self, regime: Regime) -> ModelParams {
        self.q0 = regime.data_stock();
        self
    }

    /// Returns the params unchanged if every admissibility condition holds,
    /// otherwise the first violated inequality.
    pub fn validate(self) -> Result<Validated, ModelError> {
        let checks: [(bool, &'static str); 14] = [
            (self.c_a > 0.0, "c_A > 0"),
            (self.c_a < self.c_h, "c_A < c_H"),
            (self.c_h < self.beta, "c_H < beta"),
            (self.beta < 1.0, "beta < 1"),
            (self.phi_min > 0.0 && self.phi_min <= 1.0, "0 < phi_min <= 1"),
            (self.phi >= self.phi_min, "phi >= phi_min"),
            (self.phi <= 1.0, "phi <= 1"),
            (self.lambda >= 0.0, "lambda >= 0"),
            (self.lambda <= 1.0, "lambda <= 1"),
            (self.x1 >= 0.0 && self.x1 <= 1.0, "0 <= X1 <= 1"),
            (self.m >= 1.0, "M >= 1"),
            (self.k > 0.0, "k > 0"),
            (self.f >= 0.0, "f >= 0"),
            (
                match self.q0 {
                    DataStock::Finite(q) => q >= 0.0,
                    DataStock::Infinite => true,
                },
                "Q0 >= 0",
            ),
        ];
        // NaN fails every comparison above, so it lands on the first check
        // that mentions the offending field.
        for (ok, what) in checks {
            if !ok {
                return Err(ModelError::Domain(what));
            }
        }
        if !self.f.is_finite() || !self.m.is_finite() || !self.k.is_finite() {
            return Err(ModelError::Domain("finite f, M, k"));
        }
        self.technology.check()?;
        Ok(Validated(self))
    }

    /// `lambda * phi * beta`: marginal value of model quality to an AI creator.
    pub fn quality_weight(&self) -> f64 {
        self.lambda * self.phi * self.beta
    }

    /// Slope of the AI-creation payoff in own skill, `(1 - lambda) phi beta`.
    pub fn ai_skill_slope(&self) -> f64 {
        (1.0 - self.lambda) * self.phi * self.beta
    }

    /// Slope gap between human and AI payoffs, `[1 - (1 - lambda) phi] beta`.
    pub fn human_ai_slope_gap(&self) -> f64 {
        (1.0 - (1.0 - self.lambda) * self.phi) * self.beta
    }

    pub fn training_cost_applies(&self) -> bool {
        self.f > 0.0
    }
}

/// Parameters that passed [`ModelParams::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Validated(ModelParams);

impl Validated {
    pub fn into_inner(self) -> ModelParams {
        self.0
    }

    pub fn validate(self) -> Result<Validated, ModelError> {
        self.0.validate()
    }
}

impl Deref for Validated {
    type Target = ModelParams;

    fn deref(&self) -> &ModelParams {
        &self.0
    }
}

/// Which column layout of the Period-2 threshold table applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    /// `phi <= (beta - c_H) / (beta (1 - lambda))`
    CaseI,
    CaseII,
}

/// Case I iff `phi beta (1 - lambda) <= beta - c_H`; with `lambda = 1` the
/// left side vanishes so Case I always holds.
pub fn classify_case(p: &ModelParams) -> CaseTag {
    if p.phi * p.beta * (1.0 - p.lambda) <= p.beta - p.c_h {
        CaseTag::CaseI
    } else {
        CaseTag::CaseII
    }
}
