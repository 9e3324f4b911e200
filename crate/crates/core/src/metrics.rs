//! Per-period quantities and payoffs for a given creator policy.

use serde::Serialize;

use crate::creator::Thresholds;
use crate::params::{DataStock, ModelParams};

/// Data bought by the firm out of the pool of pre-existing content and
/// Period-1 human content, at fee `f` per unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DataSale {
    pub acquired: f64,
    pub q0: DataStock,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PeriodOutcome {
    pub q_h: f64,
    pub q_a: f64,
    pub r: f64,
    /// Creator income, including their share of data sales.
    pub u: f64,
    pub s: f64,
    pub w: f64,
    pub training_income: f64,
    /// Data-sale income accruing to holders of pre-existing content.
    pub owner_income: f64,
    /// Total paid by the firm for training data.
    pub training_cost: f64,
}

impl PeriodOutcome {
    /// `u + s + r + owners - cost`, which equals `w` up to rounding.
    pub fn accounted_welfare(&self) -> f64 {
        self.u + self.s + self.r + self.owner_income - self.training_cost
    }

    pub fn plus(&self, o: &PeriodOutcome) -> PeriodOutcome {
        PeriodOutcome {
            q_h: self.q_h + o.q_h,
            q_a: self.q_a + o.q_a,
            r: self.r + o.r,
            u: self.u + o.u,
            s: self.s + o.s,
            w: self.w + o.w,
            training_income: self.training_income + o.training_income,
            owner_income: self.owner_income + o.owner_income,
            training_cost: self.training_cost + o.training_cost,
        }
    }
}

/// Split of a data sale between Period-1 creators and pre-existing owners.
/// Returns `(creators, owners, cost)`.
fn split_sale(sale: &DataSale, q_1h: f64, f: f64) -> (f64, f64, f64) {
    if f == 0.0 || sale.acquired <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let cost = f * sale.acquired;
    let creators = match sale.q0 {
        DataStock::Infinite => 0.0,
        DataStock::Finite(q0) if q0 + q_1h > 0.0 => cost * q_1h / (q0 + q_1h),
        DataStock::Finite(_) => 0.0,
    };
    (creators, cost - creators, cost)
}

/// Aggregates for `mass` creators following `t` when the model has quality
/// `quality` and the AI service costs `price`.
pub fn period_outcome(
    t: &Thresholds,
    quality: f64,
    price: f64,
    mass: f64,
    p: &ModelParams,
    sale: Option<DataSale>,
) -> PeriodOutcome {
    let (lo, hi) = (t.lo, t.hi);
    let ai_width = hi - lo;
    let q_h = mass * (1.0 - hi * hi) / 2.0;
    let q_a = mass * p.lambda * quality * ai_width + mass * (1.0 - p.lambda) * (hi * hi - lo * lo) / 2.0;
    let r = mass * price * ai_width;
    let (training_income, owner_income, training_cost) = match sale {
        Some(sale) => split_sale(&sale, q_h, p.f),
        None => (0.0, 0.0, 0.0),
    };
    let u = p.beta * (q_h + p.phi * q_a) - mass * (p.c_h * (1.0 - hi) + (p.c_a + price) * ai_width)
        + training_income;
    let s = (1.0 - p.beta) * q_h + (1.0 - p.phi * p.beta) * q_a;
    let w = q_h + q_a - mass * (p.c_h * (1.0 - hi) + p.c_a * ai_width);
    PeriodOutcome { q_h, q_a, r, u, s, w, training_income, owner_income, training_cost }
}
