//! The competitive AI firm's Period-2 choice of quality and price.
//!
//! Revenue at quality `X` is `M p (x_hi - x_lo)`. The adoption width is
//! piecewise linear in `p`, so revenue is a concave piecewise quadratic on
//! `[0, p_bar(X)]` and vanishes beyond it. Peak and break-even prices are
//! solved piece by piece; [`revenue_peak_numeric`] and
//! [`breakeven_price_numeric`] do the same job by golden section and
//! bisection and serve as cross-checks.

use serde::Serialize;

use crate::creator::base_thresholds;
use crate::params::ModelParams;
use crate::roots::{bisect_boundary, golden_section_max};
use crate::training::{DataRequirement, Training};

/// Profit slack accepted as break-even.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Quality scans stop this far below 1, where training cost explodes.
pub const QUALITY_CEILING_GAP: f64 = 1e-6;
pub const DEFAULT_SCAN_POINTS: usize = 2001;
const ENDPOINT_TOL: f64 = 1e-9;
const TIE_TOL: f64 = 1e-12;
/// Quality gains smaller than this are reported as no improvement.
pub const MIN_IMPROVEMENT: f64 = 1e-6;

fn adoption_width(x: f64, price: f64, p: &ModelParams) -> f64 {
    let t = base_thresholds(x, price, p);
    t.hi - t.lo
}

pub fn revenue(x: f64, price: f64, p: &ModelParams) -> f64 {
    p.m * price * adoption_width(x, price, p)
}

/// Highest price at which anyone adopts:
/// `lambda phi beta X + (1 - lambda) phi c_H - c_A`.
pub fn max_price(x: f64, p: &ModelParams) -> f64 {
    p.quality_weight() * x + (1.0 - p.lambda) * p.phi * p.c_h - p.c_a
}

/// Training cost `f q(X2; X1)`, zero whenever `f = 0`.
pub fn training_cost(x2: f64, p: &ModelParams) -> f64 {
    if p.f == 0.0 {
        0.0
    } else {
        p.f * Training::of(p).requirement(x2, p.x1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RevenuePeak {
    pub price: f64,
    pub revenue: f64,
}

/// Adoption width at one quality as linear pieces `alpha + gamma p` over
/// `[0, p_bar]`.
struct PriceProfile {
    pieces: Vec<(f64, f64, f64, f64)>,
}

impl PriceProfile {
    fn new(x: f64, p: &ModelParams) -> PriceProfile {
        let top = max_price(x, p);
        if !(top > 0.0) {
            return PriceProfile { pieces: Vec::new() };
        }
        let a = p.quality_weight() * x;
        let mut cuts = [0.0, top, f64::NAN, f64::NAN, f64::NAN, f64::NAN];
        let mut n = 2;
        // x_HA = 1, x_AO = 0, x_AO = 1, x_HA = 0
        for c in [
            a + p.c_h - p.c_a - p.human_ai_slope_gap(),
            a - p.c_a,
            a - p.c_a + p.ai_skill_slope(),
            a + p.c_h - p.c_a,
        ] {
            if c > 0.0 && c < top {
                cuts[n] = c;
                n += 1;
            }
        }
        let cuts = &mut cuts[..n];
        cuts.sort_by(f64::total_cmp);
        let mut pieces = Vec::with_capacity(n - 1);
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi > lo {
                // two interior points read off the exact line
                let (pa, pb) = (lo + (hi - lo) / 3.0, lo + 2.0 * (hi - lo) / 3.0);
                let (wa, wb) = (adoption_width(x, pa, p), adoption_width(x, pb, p));
                let gamma = (wb - wa) / (pb - pa);
                pieces.push((lo, hi, wa - gamma * pa, gamma));
            }
        }
        PriceProfile { pieces }
    }

    fn peak(&self, x: f64, p: &ModelParams) -> RevenuePeak {
        let mut best = RevenuePeak { price: 0.0, revenue: 0.0 };
        for &(lo, hi, alpha, gamma) in &self.pieces {
            let vertex = if gamma < 0.0 { (-alpha / (2.0 * gamma)).clamp(lo, hi) } else { hi };
            for c in [lo, hi, vertex] {
                let r = p.m * c * (alpha + gamma * c);
                if r > best.revenue {
                    best = RevenuePeak { price: c, revenue: r };
                }
            }
        }
        if best.revenue > 0.0 {
            // report the exact revenue at the chosen price
            best.revenue = revenue(x, best.price, p);
        }
        best
    }

    fn breakeven(&self, x: f64, cost: f64, peak: RevenuePeak, p: &ModelParams) -> Option<f64> {
        if cost <= 0.0 {
            return Some(0.0);
        }
        if peak.revenue - cost < -FEASIBILITY_TOL {
            return None;
        }
        if peak.revenue <= cost {
            return Some(peak.price);
        }
        for &(lo, hi, alpha, gamma) in &self.pieces {
            let hi = hi.min(peak.price);
            if hi <= lo {
                break;
            }
            if p.m * hi * (alpha + gamma * hi) < cost && hi < peak.price {
                continue;
            }
            let guess = quadratic_root(alpha, gamma, cost, p.m).clamp(lo, hi);
            let covers = |c: f64| revenue(x, c, p) >= cost;
            if covers(guess) {
                return Some(guess);
            }
            // rounding left the closed-form root a hair short
            let eps = 1e-12 * guess.max(1.0);
            let near = (guess + eps).min(peak.price);
            let ok = if covers(near) { near } else { peak.price };
            return Some(bisect_boundary(covers, ok, guess, 0.0));
        }
        Some(peak.price)
    }
}

/// Revenue-maximizing price at quality `x`; `(0, 0)` when nobody adopts at
/// any positive price.
pub fn revenue_peak(x: f64, p: &ModelParams) -> RevenuePeak {
    PriceProfile::new(x, p).peak(x, p)
}

/// Golden-section version of [`revenue_peak`].
pub fn revenue_peak_numeric(x: f64, p: &ModelParams) -> RevenuePeak {
    let top = max_price(x, p);
    if !(top > 0.0) {
        return RevenuePeak { price: 0.0, revenue: 0.0 };
    }
    let (price, r) = golden_section_max(|c| revenue(x, c, p), 0.0, top, 1e-13);
    if r > 0.0 {
        RevenuePeak { price, revenue: r }
    } else {
        RevenuePeak { price: 0.0, revenue: 0.0 }
    }
}

/// Smallest root of `M (alpha + gamma p) p = cost` on the increasing branch.
fn quadratic_root(alpha: f64, gamma: f64, cost: f64, m: f64) -> f64 {
    let c = cost / m;
    let disc = (alpha * alpha + 4.0 * gamma * c).max(0.0);
    2.0 * c / (alpha + disc.sqrt())
}

/// Lowest price at which the firm breaks even at quality `x2`.
pub fn breakeven_price(x2: f64, p: &ModelParams) -> Option<f64> {
    let cost = training_cost(x2, p);
    if cost <= 0.0 {
        return Some(0.0);
    }
    let profile = PriceProfile::new(x2, p);
    let peak = profile.peak(x2, p);
    profile.breakeven(x2, cost, peak, p)
}

/// Bisection version of [`breakeven_price`] on `[0, p_peak]`.
pub fn breakeven_price_numeric(x2: f64, p: &ModelParams) -> Option<f64> {
    let cost = training_cost(x2, p);
    if cost <= 0.0 {
        return Some(0.0);
    }
    let peak = revenue_peak_numeric(x2, p);
    if peak.revenue - cost < -FEASIBILITY_TOL {
        return None;
    }
    if peak.revenue <= cost {
        return Some(peak.price);
    }
    Some(bisect_boundary(|c| revenue(x2, c, p) >= cost, peak.price, 0.0, 1e-15))
}

/// Disjoint quality intervals on which the firm can break even.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibleSet {
    pub intervals: Vec<(f64, f64)>,
}

impl FeasibleSet {
    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= x && x <= hi)
    }
}

fn scan_top(cap: f64) -> f64 {
    cap.min(1.0 - QUALITY_CEILING_GAP)
}

fn scan(p: &ModelParams, cap: f64, n: usize) -> (Vec<f64>, Vec<Option<f64>>) {
    let top = scan_top(cap);
    if !(top > p.x1) || n < 2 {
        return (vec![p.x1], vec![Some(0.0)]);
    }
    let xs = crate::roots::linspace(p.x1, top, n);
    let prices = xs.iter().map(|&x| breakeven_price(x, p)).collect();
    (xs, prices)
}

fn merge_runs(p: &ModelParams, xs: &[f64], prices: &[Option<f64>]) -> FeasibleSet {
    let feasible = |x: f64| breakeven_price(x, p).is_some();
    let mut intervals = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        if prices[i].is_none() {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < xs.len() && prices[i + 1].is_some() {
            i += 1;
        }
        let lo = if start == 0 { xs[0] } else { bisect_boundary(feasible, xs[start], xs[start - 1], ENDPOINT_TOL) };
        let hi = if i + 1 == xs.len() { xs[i] } else { bisect_boundary(feasible, xs[i], xs[i + 1], ENDPOINT_TOL) };
        intervals.push((lo, hi));
        i += 1;
    }
    FeasibleSet { intervals }
}

pub fn feasible_set(p: &ModelParams, cap: f64) -> FeasibleSet {
    feasible_set_with(p, cap, DEFAULT_SCAN_POINTS)
}

pub fn feasible_set_with(p: &ModelParams, cap: f64, n: usize) -> FeasibleSet {
    let (xs, prices) = scan(p, cap, n);
    merge_runs(p, &xs, &prices)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Binding {
    NoImprovement,
    /// Stopped by the data cap.
    DataBound,
    /// Stopped where break-even becomes impossible.
    CostBound,
    Interior,
}

impl Binding {
    pub fn name(self) -> &'static str {
        match self {
            Binding::NoImprovement => "NO_IMPROVEMENT",
            Binding::DataBound => "DATA_BOUND",
            Binding::CostBound => "COST_BOUND",
            Binding::Interior => "INTERIOR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirmDecision {
    pub x2: f64,
    pub p2: f64,
    pub q_acquired: f64,
    /// `lambda phi beta X2 - p2`
    pub v_a: f64,
    pub binding: Binding,
    pub profit: f64,
}

impl FirmDecision {
    fn at(x2: f64, p2: f64, binding: Binding, p: &ModelParams) -> FirmDecision {
        let q_acquired = Training::of(p).requirement(x2, p.x1);
        FirmDecision {
            x2,
            p2,
            q_acquired,
            v_a: p.quality_weight() * x2 - p2,
            binding,
            profit: revenue(x2, p2, p) - training_cost(x2, p),
        }
    }
}

/// Creator value of quality `x`, or `None` if the firm cannot break even.
pub fn creator_value(x: f64, p: &ModelParams) -> Option<f64> {
    breakeven_price(x, p).map(|c| p.quality_weight() * x - c)
}

pub fn optimize(p: &ModelParams, cap: f64) -> FirmDecision {
    optimize_with(p, cap, DEFAULT_SCAN_POINTS)
}

/// Quality/price pair maximizing creator value over qualities up to `cap`.
pub fn optimize_with(p: &ModelParams, cap: f64, n: usize) -> FirmDecision {
    if cap <= p.x1 {
        return FirmDecision::at(p.x1, 0.0, Binding::NoImprovement, p);
    }
    if p.f == 0.0 {
        return FirmDecision::at(cap, 0.0, Binding::DataBound, p);
    }
    let (xs, prices) = scan(p, cap, n);
    let set = merge_runs(p, &xs, &prices);
    let w = p.quality_weight();

    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, (&x, c)) in xs.iter().zip(&prices).enumerate() {
        if let Some(c) = c {
            let v = w * x - c;
            if v >= best_v - TIE_TOL {
                best_v = v;
                best_i = i;
            }
        }
    }

    let value = |x: f64| creator_value(x, p).unwrap_or(f64::NEG_INFINITY);
    let mut candidates: Vec<(f64, f64)> = vec![(p.x1, 0.0)];
    for &(lo, hi) in &set.intervals {
        candidates.push((lo, value(lo)));
        candidates.push((hi, value(hi)));
    }
    let x_best = xs[best_i];
    candidates.push((x_best, best_v));
    if let Some(&(lo, hi)) = set.intervals.iter().find(|&&(lo, hi)| lo <= x_best && x_best <= hi) {
        let a = xs[best_i.saturating_sub(1)].max(lo);
        let b = xs[(best_i + 1).min(xs.len() - 1)].min(hi);
        candidates.push(golden_section_max(value, a, b, 1e-10));
    }

    let (mut x2, mut v2) = (p.x1, f64::NEG_INFINITY);
    for (x, v) in candidates {
        if v > v2 + TIE_TOL || (v >= v2 - TIE_TOL && x > x2) {
            x2 = x;
            v2 = v;
        }
    }
    if x2 - p.x1 < MIN_IMPROVEMENT {
        x2 = p.x1;
    }
    let p2 = if x2 > p.x1 { breakeven_price(x2, p).unwrap_or(0.0) } else { 0.0 };
    let top = scan_top(cap);
    let binding = if x2 <= p.x1 {
        Binding::NoImprovement
    } else if x2 >= top - ENDPOINT_TOL {
        Binding::DataBound
    } else if set.intervals.iter().any(|&(_, hi)| (hi - x2).abs() <= ENDPOINT_TOL) {
        Binding::CostBound
    } else {
        Binding::Interior
    };
    FirmDecision::at(x2, p2, binding, p)
}
