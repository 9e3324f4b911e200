//! Period-1 creator policy.
//!
//! With a zero fee or unlimited pre-existing data, Period-1 creators earn
//! nothing from training and play the Period-2 threshold rule at `(X1, 0)`.
//! Otherwise their incentive depends on how much the firm will buy, which in
//! turn depends on how much they create. The plan is fixed by letting the
//! firm optimize against the data that full compensation would produce, and
//! the resulting demand pins down the acquisition probability.

use serde::Serialize;

use crate::creator::{base_thresholds, full_comp_thresholds, partial_comp_thresholds, Thresholds};
use crate::error::ModelError;
use crate::firm;
use crate::params::{DataStock, ModelParams};
use crate::training::{DataRequirement, Training};

/// Band used to decide whether the planned quality sits on `X1` or `X^F`.
pub const PLAN_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Scenario {
    GenerousOrAbundant,
    NoDemand,
    Partial,
    Full,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::GenerousOrAbundant => "GENEROUS_OR_ABUNDANT",
            Scenario::NoDemand => "NO_DEMAND",
            Scenario::Partial => "PARTIAL",
            Scenario::Full => "FULL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Period1Solution {
    pub thresholds: Thresholds,
    pub q_1h: f64,
    pub q_1a: f64,
    pub scenario: Scenario,
    /// Planned Period-2 quality; `X1` when no plan is needed.
    pub x_c: f64,
    /// Planned data demand; 0 unless some content is expected to sell.
    pub q_c: f64,
    /// Quality reachable if every full-compensation human work is used.
    pub x_f: Option<f64>,
    pub residual_ho: Option<f64>,
    pub residual_ha: Option<f64>,
    pub warnings: Vec<String>,
}

fn with_quantities(t: Thresholds, p: &ModelParams) -> (f64, f64) {
    let q_1h = 0.5 * (1.0 - t.hi * t.hi);
    let q_1a = p.lambda * p.x1 * (t.hi - t.lo) + (1.0 - p.lambda) * 0.5 * (t.hi * t.hi - t.lo * t.lo);
    (q_1h, q_1a)
}

fn plain(t: Thresholds, scenario: Scenario, x_c: f64, q_c: f64, p: &ModelParams) -> Period1Solution {
    let (q_1h, q_1a) = with_quantities(t, p);
    Period1Solution {
        thresholds: t,
        q_1h,
        q_1a,
        scenario,
        x_c,
        q_c,
        x_f: None,
        residual_ho: None,
        residual_ha: None,
        warnings: Vec::new(),
    }
}

pub fn solve_period1_easy(p: &ModelParams) -> Period1Solution {
    plain(base_thresholds(p.x1, 0.0, p), Scenario::GenerousOrAbundant, p.x1, 0.0, p)
}

pub fn solve_period1_strict(p: &ModelParams) -> Result<Period1Solution, ModelError> {
    let q0 = match p.q0 {
        DataStock::Finite(q0) => q0,
        DataStock::Infinite => return Err(ModelError::Domain("finite Q0")),
    };
    if !(p.f > 0.0) {
        return Err(ModelError::Domain("f > 0"));
    }
    let training = Training::of(p);
    let full = full_comp_thresholds(p);
    let (q_1h_full, _) = with_quantities(full, p);
    let x_f = training.quality_for(DataStock::Finite(q0 + q_1h_full), p.x1);
    let x_c = firm::optimize(p, x_f).x2;

    let mut sol = if x_c <= p.x1 + PLAN_BAND {
        plain(base_thresholds(p.x1, 0.0, p), Scenario::NoDemand, x_c, 0.0, p)
    } else if x_c >= x_f - PLAN_BAND {
        plain(full, Scenario::Full, x_c, training.requirement(x_c, p.x1), p)
    } else {
        let q_c = training.requirement(x_c, p.x1);
        let pc = partial_comp_thresholds(q_c, p)?;
        let mut s = plain(pc.thresholds, Scenario::Partial, x_c, q_c, p);
        s.residual_ho = Some(pc.residual_ho);
        s.residual_ha = pc.residual_ha;
        s
    };
    sol.x_f = Some(x_f);
    let supply = q0 + sol.q_1h;
    if sol.q_c > supply + 1e-9 {
        sol.warnings.push(format!("planned demand {} exceeds supply {}", sol.q_c, supply));
    }
    Ok(sol)
}

pub fn solve_period1(p: &ModelParams) -> Result<Period1Solution, ModelError> {
    if p.f == 0.0 || p.q0.is_infinite() {
        Ok(solve_period1_easy(p))
    } else {
        solve_period1_strict(p)
    }
}
