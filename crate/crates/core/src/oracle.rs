//! Brute-force reimplementation of the model on discretized creators and
//! exhaustive firm grids. Nothing here reuses the closed forms it checks:
//! creators compare payoffs one by one, the firm scans price grids, and
//! Period-1 expectations are found by damped iteration.

use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::creator::{
    base_thresholds, best_choice, full_comp_thresholds, partial_comp_thresholds, utility_ai, utility_human, Choice,
    Compensation, Thresholds,
};
use crate::error::ModelError;
use crate::firm::{self, Binding, FirmDecision, FEASIBILITY_TOL};
use crate::params::{DataStock, ModelParams, DEFAULT_PHI_MIN};
use crate::period1::Scenario;
use crate::roots::{bisect_boundary, linspace};
use crate::training::{DataRequirement, Training};

pub const DEFAULT_AGENTS: usize = 10_001;
pub const DEFAULT_FIRM_GRID: usize = 2001;
pub const DAMPING: f64 = 0.5;
pub const FIXED_POINT_TOL: f64 = 1e-9;
pub const MAX_FIXED_POINT_ITERATIONS: usize = 10_000;

/// Creators at skills `i / (n - 1)` with their current choices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentGrid {
    pub skills: Vec<f64>,
    pub choices: Vec<Choice>,
}

impl AgentGrid {
    pub fn new(n: usize) -> AgentGrid {
        let n = n.max(2);
        AgentGrid { skills: linspace(0.0, 1.0, n), choices: vec![Choice::None; n] }
    }

    pub fn n(&self) -> usize {
        self.skills.len()
    }

    pub fn cell(&self) -> f64 {
        1.0 / (self.n() - 1) as f64
    }

    /// `(lo, hi)`: first skill that creates at all and first that creates by
    /// hand, each 1 when nobody does.
    pub fn empirical_thresholds(&self) -> (f64, f64) {
        let first = |pred: fn(Choice) -> bool| {
            self.choices.iter().position(|&c| pred(c)).map_or(1.0, |i| self.skills[i])
        };
        (first(|c| c != Choice::None), first(|c| c == Choice::Human))
    }

    /// Number of adjacent agents whose choices differ.
    pub fn switch_points(&self) -> usize {
        self.choices.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Whether choices run NONE, then AI, then HUMAN in skill order.
    pub fn is_skill_ordered(&self) -> bool {
        let rank = |c: Choice| match c {
            Choice::None => 0,
            Choice::Ai => 1,
            Choice::Human => 2,
        };
        self.choices.windows(2).all(|w| rank(w[0]) <= rank(w[1]))
    }

    fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n() {
            0.5 * self.cell()
        } else {
            self.cell()
        }
    }

    /// Expected high-quality human output per unit mass.
    pub fn human_content(&self) -> f64 {
        (0..self.n()).filter(|&i| self.choices[i] == Choice::Human).map(|i| self.weight(i) * self.skills[i]).sum()
    }

    /// Expected high-quality AI output per unit mass at model quality `quality`.
    pub fn ai_content(&self, quality: f64, lambda: f64) -> f64 {
        (0..self.n())
            .filter(|&i| self.choices[i] == Choice::Ai)
            .map(|i| self.weight(i) * (lambda * quality + (1.0 - lambda) * self.skills[i]))
            .sum()
    }
}

/// Each agent picks the best of its three payoffs.
pub fn best_respond(grid: &mut AgentGrid, quality: f64, price: f64, rho: f64, p: &ModelParams) {
    let comp = Compensation::Partial { rho };
    for (x, c) in grid.skills.iter().zip(grid.choices.iter_mut()) {
        *c = best_choice(utility_ai(*x, quality, price, p), utility_human(*x, comp, p));
    }
}

/// One step of a fixed-point run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceStep {
    pub rho: f64,
    pub q_1h: f64,
    pub q_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointTrace {
    pub iterations: Vec<TraceStep>,
    pub converged: bool,
    pub final_residual: f64,
    /// Times the damping was halved after an oscillation was detected.
    pub damping_cuts: usize,
}

impl FixedPointTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,rho,Q_1H,Q_C\n");
        for (i, s) in self.iterations.iter().enumerate() {
            let _ = writeln!(out, "{i},{:e},{:e},{:e}", s.rho, s.q_1h, s.q_c);
        }
        out
    }
}

/// Damped iteration `rho <- rho + a (g(rho) - rho)`.
///
/// On a finite agent grid `g` is a step function, and if its crossing with
/// the diagonal falls on a jump the iteration oscillates around it. Each
/// time consecutive steps change sign the damping `a` is halved, so the run
/// settles on the jump; every cut is counted in the trace.
fn damped_iteration<G: FnMut(f64) -> (f64, TraceStep)>(
    mut g: G,
    rho0: f64,
) -> Result<(f64, FixedPointTrace), (ModelError, FixedPointTrace)> {
    let mut trace = FixedPointTrace { iterations: Vec::new(), converged: false, final_residual: f64::NAN, damping_cuts: 0 };
    let mut rho = rho0;
    let mut damping = DAMPING;
    let mut last_step = 0.0;
    for _ in 0..MAX_FIXED_POINT_ITERATIONS {
        let (target, step) = g(rho);
        trace.iterations.push(step);
        let delta = damping * (target - rho);
        if delta * last_step < 0.0 {
            damping *= 0.5;
            trace.damping_cuts += 1;
        }
        trace.final_residual = delta.abs();
        rho += delta;
        last_step = delta;
        if delta.abs() < FIXED_POINT_TOL {
            trace.converged = true;
            return Ok((rho, trace));
        }
    }
    let iterations = trace.iterations.len();
    let last_step = trace.final_residual;
    Err((ModelError::NonConvergence { iterations, last_step }, trace))
}

/// Acquisition probability when `q_c` units are bought out of `q0 + q_1h`.
fn rationing(q_c: f64, q0: f64, q_1h: f64) -> f64 {
    let pool = q0 + q_1h;
    if q_c <= 0.0 {
        0.0
    } else if pool > 0.0 {
        (q_c / pool).min(1.0)
    } else {
        1.0
    }
}

/// Creators' expectations when the firm's demand `q_c` is given.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CreatorFixedPoint {
    pub rho: f64,
    pub thresholds: (f64, f64),
    pub q_1h: f64,
    pub trace: FixedPointTrace,
}

pub fn creator_fixed_point(q_c: f64, p: &ModelParams, n: usize) -> Result<CreatorFixedPoint, ModelError> {
    let q0 = finite_stock(p)?;
    let mut grid = AgentGrid::new(n);
    let result = damped_iteration(
        |rho| {
            best_respond(&mut grid, p.x1, 0.0, rho, p);
            let q_1h = grid.human_content();
            (rationing(q_c, q0, q_1h), TraceStep { rho, q_1h, q_c })
        },
        0.0,
    );
    let (rho, trace) = result.map_err(|(e, _)| e)?;
    best_respond(&mut grid, p.x1, 0.0, rho, p);
    Ok(CreatorFixedPoint { rho, thresholds: grid.empirical_thresholds(), q_1h: grid.human_content(), trace })
}

fn finite_stock(p: &ModelParams) -> Result<f64, ModelError> {
    match p.q0 {
        DataStock::Finite(q0) => Ok(q0),
        DataStock::Infinite => Err(ModelError::Domain("finite Q0")),
    }
}

/// Minimal price on `grid` (refined inside the bracketing cell) at which the
/// firm breaks even at quality `x`.
fn grid_breakeven(x: f64, prices: &[f64], p: &ModelParams) -> Option<f64> {
    let cost = firm::training_cost(x, p);
    if cost <= 0.0 {
        return Some(0.0);
    }
    let ok = |c: f64| firm::revenue(x, c, p) - cost >= -FEASIBILITY_TOL;
    let j = prices.iter().position(|&c| ok(c))?;
    if j == 0 {
        return Some(prices[0]);
    }
    Some(bisect_boundary(ok, prices[j], prices[j - 1], 1e-15))
}

/// Result of an exhaustive firm search, with grid spacings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSearch {
    pub decision: FirmDecision,
    pub x_cell: f64,
    pub p_cell: f64,
}

fn decision(x2: f64, p2: f64, binding: Binding, p: &ModelParams) -> FirmDecision {
    FirmDecision {
        x2,
        p2,
        q_acquired: Training::of(p).requirement(x2, p.x1),
        v_a: p.quality_weight() * x2 - p2,
        binding,
        profit: firm::revenue(x2, p2, p) - firm::training_cost(x2, p),
    }
}

/// Best creator value over an `nx` x `np` grid of qualities in
/// `[X1, min(cap, 1 - 1e-6)]` and prices in `[0, p_bar(top)]`.
pub fn firm_grid_search(p: &ModelParams, cap: f64, nx: usize, np: usize) -> GridSearch {
    let top = cap.min(1.0 - firm::QUALITY_CEILING_GAP);
    if !(top > p.x1) {
        return GridSearch { decision: decision(p.x1, 0.0, Binding::NoImprovement, p), x_cell: 0.0, p_cell: 0.0 };
    }
    let xs = linspace(p.x1, top, nx);
    let p_top = firm::max_price(top, p).max(0.0);
    let prices = linspace(0.0, p_top, np);
    let w = p.quality_weight();
    let mut best = (p.x1, w * p.x1);
    for &x in &xs {
        if let Some(c) = grid_breakeven(x, &prices, p) {
            keep_better(&mut best, x, w * x - c);
        }
    }
    let best_x = best.0;
    let best_p = w * best_x - best.1;
    let binding = if best_x <= p.x1 {
        Binding::NoImprovement
    } else if best_x >= top {
        Binding::DataBound
    } else {
        Binding::Interior
    };
    GridSearch {
        decision: decision(best_x, best_p, binding, p),
        x_cell: (top - p.x1) / (nx - 1) as f64,
        p_cell: p_top / (np - 1) as f64,
    }
}

/// Brute-force firm responses for arbitrary caps: a coarse table of
/// break-even prices plus zoomed rescans around the best cell.
struct FirmTable<'a> {
    p: &'a ModelParams,
    xs: Vec<f64>,
    values: Vec<f64>,
    prices: Vec<f64>,
}

impl<'a> FirmTable<'a> {
    fn new(p: &'a ModelParams, top: f64, nx: usize, np: usize) -> FirmTable<'a> {
        let top = top.min(1.0 - firm::QUALITY_CEILING_GAP).max(p.x1);
        let xs = linspace(p.x1, top, nx);
        let prices = linspace(0.0, firm::max_price(top, p).max(0.0), np);
        let w = p.quality_weight();
        let values = xs
            .iter()
            .map(|&x| grid_breakeven(x, &prices, p).map_or(f64::NEG_INFINITY, |c| w * x - c))
            .collect();
        FirmTable { p, xs, values, prices }
    }

    fn value(&self, x: f64) -> f64 {
        grid_breakeven(x, &self.prices, self.p).map_or(f64::NEG_INFINITY, |c| self.p.quality_weight() * x - c)
    }

    /// Chosen quality when data supports at most `cap`.
    fn respond(&self, cap: f64) -> f64 {
        let p = self.p;
        let cap = cap.min(1.0 - firm::QUALITY_CEILING_GAP);
        if cap <= p.x1 {
            return p.x1;
        }
        let mut best = (p.x1, p.quality_weight() * p.x1);
        let mut last = 0;
        for (i, (&x, &v)) in self.xs.iter().zip(&self.values).enumerate() {
            if x > cap {
                break;
            }
            last = i;
            keep_better(&mut best, x, v);
        }
        keep_better(&mut best, cap, self.value(cap));
        let (mut lo, mut hi) = match self.xs[..=last].iter().position(|&x| x == best.0) {
            Some(i) => (self.xs[i.saturating_sub(1)], if i < last { self.xs[i + 1] } else { cap }),
            None => (self.xs[last], cap),
        };
        for _ in 0..2 {
            let zoom = linspace(lo, hi, 201);
            for &x in &zoom {
                keep_better(&mut best, x, self.value(x));
            }
            match zoom.iter().position(|&x| x == best.0) {
                Some(i) => (lo, hi) = (zoom[i.saturating_sub(1)], zoom[(i + 1).min(zoom.len() - 1)]),
                None => break,
            }
        }
        best.0
    }
}

/// Replaces `best` by `(x, v)` if `v` is higher, or equal within 1e-12 at a
/// larger quality.
fn keep_better(best: &mut (f64, f64), x: f64, v: f64) {
    if v > best.1 + 1e-12 || (v >= best.1 - 1e-12 && x > best.0) {
        *best = (x, v);
    }
}

/// Period-1 equilibrium found by iterating creators' expectations against a
/// brute-force firm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEquilibrium {
    pub rho: f64,
    pub thresholds: (f64, f64),
    pub q_1h: f64,
    pub q_c: f64,
    pub x2: f64,
    pub scenario: Scenario,
    pub trace: FixedPointTrace,
}

pub fn fixed_point(p: &ModelParams, n: usize) -> Result<OracleEquilibrium, (ModelError, FixedPointTrace)> {
    let q0 = finite_stock(p).map_err(|e| (e, FixedPointTrace::empty()))?;
    if !(p.f > 0.0) {
        return Err((ModelError::Domain("f > 0"), FixedPointTrace::empty()));
    }
    let training = Training::of(p);
    // Period-1 human output never exceeds 1/2
    let table = FirmTable::new(p, training.quality_for(DataStock::Finite(q0 + 0.5), p.x1), DEFAULT_FIRM_GRID, DEFAULT_FIRM_GRID);
    let mut grid = AgentGrid::new(n);
    let (rho, trace) = damped_iteration(
        |rho| {
            best_respond(&mut grid, p.x1, 0.0, rho, p);
            let q_1h = grid.human_content();
            let x2 = table.respond(training.quality_for(DataStock::Finite(q0 + q_1h), p.x1));
            let q_c = training.requirement(x2, p.x1).min(q0 + q_1h);
            (rationing(q_c, q0, q_1h), TraceStep { rho, q_1h, q_c })
        },
        0.0,
    )?;
    best_respond(&mut grid, p.x1, 0.0, rho, p);
    let q_1h = grid.human_content();
    let x2 = table.respond(training.quality_for(DataStock::Finite(q0 + q_1h), p.x1));
    let q_c = training.requirement(x2, p.x1).min(q0 + q_1h);
    let scenario = if q_c <= 0.0 {
        Scenario::NoDemand
    } else if rho >= 1.0 - FIXED_POINT_TOL {
        Scenario::Full
    } else {
        Scenario::Partial
    };
    Ok(OracleEquilibrium { rho, thresholds: grid.empirical_thresholds(), q_1h, q_c, x2, scenario, trace })
}

impl FixedPointTrace {
    fn empty() -> FixedPointTrace {
        FixedPointTrace { iterations: Vec::new(), converged: false, final_residual: f64::NAN, damping_cuts: 0 }
    }
}

/// Random parameter point satisfying every admissibility condition.
pub fn random_params<R: Rng>(rng: &mut R, q0: Option<DataStock>) -> ModelParams {
    let beta = rng.gen_range(0.2..0.95);
    let c_h = beta * rng.gen_range(0.05..0.95);
    let c_a = c_h * rng.gen_range(0.05..0.95);
    let q0 = q0.unwrap_or_else(|| {
        if rng.gen_bool(0.5) {
            DataStock::Infinite
        } else {
            DataStock::Finite(rng.gen_range(0.0..0.5))
        }
    });
    ModelParams {
        f: rng.gen_range(0.0..0.5),
        phi: rng.gen_range(DEFAULT_PHI_MIN..=1.0),
        phi_min: DEFAULT_PHI_MIN,
        beta,
        c_h,
        c_a,
        lambda: rng.gen_range(0.0..=1.0),
        m: rng.gen_range(1.0..4.0),
        k: rng.gen_range(1.0..10.0),
        x1: rng.gen_range(0.0..=1.0),
        q0,
        technology: Default::default(),
    }
}

/// Closed-form thresholds compared against agent best responses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdCheck {
    pub label: String,
    pub closed: (f64, f64),
    pub empirical: (f64, f64),
    pub distance: f64,
    pub skill_ordered: bool,
    pub switch_points: usize,
    pub human_content_gap: f64,
}

/// Settings for [`threshold_checks`].
#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub agents: usize,
    /// Added to every closed-form `x_hi`; non-zero only to prove the check
    /// can fail.
    pub corrupt_hi: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { agents: DEFAULT_AGENTS, corrupt_hi: 0.0 }
    }
}

/// Compares closed-form thresholds with agent best responses at one point,
/// under every compensation regime that applies to it.
pub fn threshold_checks(p: &ModelParams, quality: f64, price: f64, opts: CheckOptions) -> Vec<ThresholdCheck> {
    let mut cases: Vec<(String, Thresholds, f64, f64)> = vec![
        ("period1".into(), base_thresholds(p.x1, 0.0, p), p.x1, 0.0),
        (format!("X={quality:.4},p={price:.4}"), base_thresholds(quality, price, p), quality, price),
    ];
    if p.f > 0.0 {
        let full = full_comp_thresholds(p);
        cases.push(("full".into(), full, p.x1, 0.0));
        if let DataStock::Finite(q0) = p.q0 {
            let q_c = 0.5 * (q0 + full.human_share());
            if q_c > 0.0 {
                if let Ok(pc) = partial_comp_thresholds(q_c, p) {
                    cases.push(("partial".into(), pc.thresholds, p.x1, 0.0));
                }
            }
        }
    }
    let mut grid = AgentGrid::new(opts.agents);
    cases
        .into_iter()
        .map(|(label, t, x, c)| {
            best_respond(&mut grid, x, c, t.regime.rho(), p);
            let closed = (t.lo, (t.hi + opts.corrupt_hi).clamp(0.0, 1.0));
            let empirical = grid.empirical_thresholds();
            let distance = (closed.0 - empirical.0).abs().max((closed.1 - empirical.1).abs());
            ThresholdCheck {
                label,
                closed,
                empirical,
                distance,
                skill_ordered: grid.is_skill_ordered(),
                switch_points: grid.switch_points(),
                human_content_gap: (grid.human_content() - t.human_share()).abs(),
            }
        })
        .collect()
}
