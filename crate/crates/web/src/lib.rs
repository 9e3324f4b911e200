//! Browser bindings: solve one point, trace a metric along `phi`, and show
//! the creator skill bands at a given model quality and price.
//!
//! Every entry point takes a JSON object of overrides on top of a preset,
//! e.g. `{"regime": "scarce", "f": 0.2, "phi": 0.6}`, and returns JSON.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use copyright_eq::creator::base_thresholds;
use copyright_eq::policy::{step_grid, Metric};
use copyright_eq::{solve, DataStock, ModelParams, Regime};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Overrides {
    regime: Option<Regime>,
    f: Option<f64>,
    phi: Option<f64>,
    beta: Option<f64>,
    c_h: Option<f64>,
    c_a: Option<f64>,
    lambda: Option<f64>,
    m: Option<f64>,
    k: Option<f64>,
    x1: Option<f64>,
    /// Finite stock; omitted means the regime's stock.
    q0: Option<f64>,
}

impl Overrides {
    fn params(&self) -> ModelParams {
        let mut p = ModelParams::paper(self.regime.unwrap_or(Regime::Abundant));
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut p.f, self.f);
        set(&mut p.phi, self.phi);
        set(&mut p.beta, self.beta);
        set(&mut p.c_h, self.c_h);
        set(&mut p.c_a, self.c_a);
        set(&mut p.lambda, self.lambda);
        set(&mut p.m, self.m);
        set(&mut p.k, self.k);
        set(&mut p.x1, self.x1);
        if let Some(q) = self.q0 {
            p.q0 = DataStock::Finite(q);
        }
        p
    }
}

fn parse(json: &str) -> Result<ModelParams, String> {
    let o: Overrides = if json.trim().is_empty() {
        Overrides::default()
    } else {
        serde_json::from_str(json).map_err(|e| format!("bad parameters: {e}"))?
    };
    let p = o.params();
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

fn to_js<T: Serialize>(v: &T) -> Result<String, JsError> {
    serde_json::to_string(v).map_err(|e| JsError::new(&e.to_string()))
}

#[derive(Serialize)]
struct Summary {
    scenario: &'static str,
    rho: f64,
    x2: f64,
    p2: f64,
    thresholds1: (f64, f64),
    thresholds2: (f64, f64),
    period1: Metrics,
    period2: Metrics,
    w: f64,
    s: f64,
    u: f64,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct Metrics {
    q_h: f64,
    q_a: f64,
    u: f64,
    s: f64,
    w: f64,
}

impl From<&copyright_eq::PeriodOutcome> for Metrics {
    fn from(o: &copyright_eq::PeriodOutcome) -> Metrics {
        Metrics { q_h: o.q_h, q_a: o.q_a, u: o.u, s: o.s, w: o.w }
    }
}

/// Full two-period equilibrium at one parameter point.
#[wasm_bindgen]
pub fn solve_equilibrium(params: &str) -> Result<String, JsError> {
    let p = parse(params).map_err(|e| JsError::new(&e))?;
    let r = solve(&p).map_err(|e| JsError::new(&e.to_string()))?;
    to_js(&Summary {
        scenario: r.period1.scenario.name(),
        rho: r.rho(),
        x2: r.firm.x2,
        p2: r.firm.p2,
        thresholds1: (r.period1.thresholds.lo, r.period1.thresholds.hi),
        thresholds2: (r.period2.lo, r.period2.hi),
        period1: (&r.outcome1).into(),
        period2: (&r.outcome2).into(),
        w: r.longterm.w,
        s: r.longterm.s,
        u: r.longterm.u,
        warnings: r.warnings,
    })
}

#[derive(Serialize)]
struct Curve {
    metric: &'static str,
    xs: Vec<f64>,
    /// `null` where the solve failed.
    ys: Vec<Option<f64>>,
}

/// `metric` against `phi` on `[phi_min, 1]` with the given step.
#[wasm_bindgen]
pub fn phi_curve(params: &str, metric: &str, step: f64) -> Result<String, JsError> {
    let p = parse(params).map_err(|e| JsError::new(&e))?;
    let m = Metric::parse(metric).ok_or_else(|| JsError::new(&format!("unknown metric {metric}")))?;
    if !(step > 0.0) {
        return Err(JsError::new("step must be positive"));
    }
    let xs = step_grid(p.phi_min, 1.0, step);
    let ys = xs.iter().map(|&phi| solve(&ModelParams { phi, ..p }).ok().map(|r| m.value(&r))).collect();
    to_js(&Curve { metric: m.name(), xs, ys })
}

#[derive(Serialize)]
struct Bands {
    lo: f64,
    hi: f64,
    none: f64,
    ai: f64,
    human: f64,
}

/// Skill cutoffs of creators facing a model of `quality` sold at `price`.
#[wasm_bindgen]
pub fn creator_policy(params: &str, quality: f64, price: f64) -> Result<String, JsError> {
    let p = parse(params).map_err(|e| JsError::new(&e))?;
    if !(0.0..=1.0).contains(&quality) || !(price >= 0.0) {
        return Err(JsError::new("quality must be in [0, 1] and price nonnegative"));
    }
    let t = base_thresholds(quality, price, &p);
    to_js(&Bands { lo: t.lo, hi: t.hi, none: t.lo, ai: t.hi - t.lo, human: 1.0 - t.hi })
}
