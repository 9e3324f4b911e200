//! Two-period equilibrium at one parameter point.

use serde::Serialize;
use thiserror::Error;

use crate::creator::{base_thresholds, Thresholds};
use crate::error::ModelError;
use crate::firm::{self, FirmDecision, FEASIBILITY_TOL};
use crate::metrics::{period_outcome, DataSale, PeriodOutcome};
use crate::params::{DataStock, ModelParams};
use crate::period1::{solve_period1, Period1Solution};
use crate::training::{DataRequirement, Training};

/// Gap between the planned and realized Period-2 quality reported as a
/// warning.
pub const PLAN_MISMATCH_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{source} (at {point})")]
pub struct SolveError {
    pub point: String,
    pub source: ModelError,
}

impl SolveError {
    fn at(p: &ModelParams, source: ModelError) -> SolveError {
        SolveError { point: describe(p), source }
    }
}

/// Compact `name=value` rendering of a parameter point.
pub fn describe(p: &ModelParams) -> String {
    format!(
        "f={} phi={} beta={} c_H={} c_A={} lambda={} M={} k={} X1={} Q0={}",
        p.f, p.phi, p.beta, p.c_h, p.c_a, p.lambda, p.m, p.k, p.x1, p.q0
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LongTerm {
    pub u: f64,
    pub s: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Objectives {
    pub w: f64,
    pub s: f64,
    pub x2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub params: ModelParams,
    pub period1: Period1Solution,
    pub outcome1: PeriodOutcome,
    /// Period-1 service price, always 0: the initial model is free to run.
    pub p1: f64,
    pub firm: FirmDecision,
    /// Quality cap the firm faced.
    pub data_cap: f64,
    pub period2: Thresholds,
    pub outcome2: PeriodOutcome,
    pub longterm: LongTerm,
    pub objectives: Objectives,
    pub warnings: Vec<String>,
}

impl EquilibriumReport {
    /// Probability that a Period-1 human work is sold for training.
    pub fn rho(&self) -> f64 {
        self.period1.thresholds.regime.rho()
    }
}

pub fn solve(p: &ModelParams) -> Result<EquilibriumReport, SolveError> {
    let p = p.validate().map_err(|e| SolveError::at(p, e))?.into_inner();
    let period1 = solve_period1(&p).map_err(|e| SolveError::at(&p, e))?;
    let training = Training::of(&p);
    let data_cap = training.quality_for(p.q0.plus(period1.q_1h), p.x1);
    let firm = firm::optimize(&p, data_cap);

    let mut warnings = period1.warnings.clone();
    if period1.x_f.is_some() && (firm.x2 - period1.x_c).abs() > PLAN_MISMATCH_TOL {
        warnings.push(format!("realized X2 {} differs from planned {}", firm.x2, period1.x_c));
    }
    if firm.profit < -FEASIBILITY_TOL {
        warnings.push(format!("firm profit {} below zero", firm.profit));
    }

    let sale = (p.f > 0.0 && firm.q_acquired > 0.0).then_some(DataSale { acquired: firm.q_acquired, q0: p.q0 });
    let outcome1 = period_outcome(&period1.thresholds, p.x1, 0.0, 1.0, &p, sale);
    let period2 = base_thresholds(firm.x2, firm.p2, &p);
    let outcome2 = period_outcome(&period2, firm.x2, firm.p2, p.m, &p, None);
    if let DataStock::Finite(q0) = p.q0 {
        if firm.q_acquired > q0 + period1.q_1h + 1e-9 {
            warnings.push(format!("firm trains on {} units but only {} exist", firm.q_acquired, q0 + period1.q_1h));
        }
    }

    let longterm = LongTerm {
        u: outcome1.u + outcome2.u,
        s: outcome1.s + outcome2.s,
        w: outcome1.w + outcome2.w,
    };
    Ok(EquilibriumReport {
        params: p,
        objectives: Objectives { w: longterm.w, s: longterm.s, x2: firm.x2 },
        period1,
        outcome1,
        p1: 0.0,
        firm,
        data_cap,
        period2,
        outcome2,
        longterm,
        warnings,
    })
}
