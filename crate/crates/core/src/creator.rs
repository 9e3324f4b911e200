//! Creators' double-threshold production policy.
//!
//! A creator with skill `x` compares three payoffs: no creation (0), AI
//! creation and human creation. Human creation has the steepest slope in
//! `x`, so the optimal policy is always: nothing below `lo`, AI on
//! `[lo, hi)`, human at or above `hi`. Exact ties go HUMAN > AI > NONE.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::params::{classify_case, CaseTag, DataStock, ModelParams};
use crate::roots::root_increasing;

/// Residual bound for the implicit partial-compensation thresholds.
pub const IMPLICIT_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Choice {
    None,
    Ai,
    Human,
}

/// How much of a human work's training value its creator expects to receive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compensation {
    NoTrainingIncome,
    /// Every high-quality human work is bought at the fee.
    Full,
    /// A work is bought with probability `rho`.
    Partial { rho: f64 },
}

impl Compensation {
    pub fn rho(self) -> f64 {
        match self {
            Compensation::NoTrainingIncome => 0.0,
            Compensation::Full => 1.0,
            Compensation::Partial { rho } => rho,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub lo: f64,
    pub hi: f64,
    pub regime: Compensation,
}

impl Thresholds {
    pub fn choice_at(&self, x: f64) -> Choice {
        if x >= self.hi {
            Choice::Human
        } else if x >= self.lo {
            Choice::Ai
        } else {
            Choice::None
        }
    }

    /// High-quality human output of a unit mass of creators.
    pub fn human_share(&self) -> f64 {
        0.5 * (1.0 - self.hi * self.hi)
    }
}

/// Model qualities at which the threshold table switches columns, for a
/// given price. Infinite when `lambda phi beta = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QualityBreakpoints {
    pub x_a: f64,
    pub x_h: f64,
    pub x_n: f64,
}

pub fn quality_breakpoints(price: f64, p: &ModelParams) -> QualityBreakpoints {
    let w = p.quality_weight();
    let div = |num: f64| if w > 0.0 { num / w } else { crossing(num, 0.0) };
    QualityBreakpoints {
        x_a: div(p.c_a + price - (1.0 - p.lambda) * p.phi * p.c_h),
        x_h: div(p.c_a + price + p.human_ai_slope_gap() - p.c_h),
        x_n: div(p.c_a + price),
    }
}

pub fn utility_human(x: f64, comp: Compensation, p: &ModelParams) -> f64 {
    (p.beta + comp.rho() * p.f) * x - p.c_h
}

pub fn utility_ai(x: f64, quality: f64, price: f64, p: &ModelParams) -> f64 {
    p.phi * p.beta * (p.lambda * quality + (1.0 - p.lambda) * x) - p.c_a - price
}

/// Argmax of the three payoffs with the HUMAN > AI > NONE tie order.
pub fn best_choice(u_ai: f64, u_human: f64) -> Choice {
    if u_human >= u_ai && u_human >= 0.0 {
        Choice::Human
    } else if u_ai >= 0.0 {
        Choice::Ai
    } else {
        Choice::None
    }
}

/// Smallest `x` with `slope * x >= level` for `slope >= 0`.
fn crossing(level: f64, slope: f64) -> f64 {
    if slope > 0.0 {
        level / slope
    } else if level <= 0.0 {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    }
}

fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Human-over-nothing threshold `c_H / beta`.
pub fn x_ho(p: &ModelParams) -> f64 {
    p.c_h / p.beta
}

/// Human-over-AI threshold (unclamped).
pub fn x_ha(quality: f64, price: f64, p: &ModelParams) -> f64 {
    crossing(p.quality_weight() * quality + p.c_h - p.c_a - price, p.human_ai_slope_gap())
}

/// AI-over-nothing threshold (unclamped). With `lambda = 1` AI payoff does
/// not depend on skill and this is `-inf` or `+inf`.
pub fn x_ao(quality: f64, price: f64, p: &ModelParams) -> f64 {
    crossing(p.c_a + price - p.quality_weight() * quality, p.ai_skill_slope())
}

/// Period-2 style thresholds without training income, read off the
/// Case I / Case II table by locating `quality` among the breakpoints.
pub fn base_thresholds(quality: f64, price: f64, p: &ModelParams) -> Thresholds {
    let a = p.quality_weight() * quality;
    // a <= w * X_A(p), etc., written without dividing by w
    let below_a = a <= p.c_a + price - (1.0 - p.lambda) * p.phi * p.c_h;
    let below_n = a <= p.c_a + price;
    let below_h = a <= p.c_a + price + p.human_ai_slope_gap() - p.c_h;

    let (lo, hi) = if below_a {
        let t = x_ho(p);
        (t, t)
    } else {
        let ao = x_ao(quality, price, p);
        let ha = x_ha(quality, price, p);
        match classify_case(p) {
            CaseTag::CaseI if below_n => (ao, ha),
            CaseTag::CaseI if below_h => (0.0, ha),
            CaseTag::CaseII if below_h => (ao, ha),
            CaseTag::CaseII if below_n => (ao, 1.0),
            _ => (0.0, 1.0),
        }
    };
    Thresholds { lo: clamp01(lo), hi: clamp01(hi), regime: Compensation::NoTrainingIncome }
}

/// Thresholds when a human work earns `rho * f` in training income on top of
/// its consumption value. Agrees with [`base_thresholds`] at `rho = 0`.
pub fn thresholds_with_income(quality: f64, price: f64, comp: Compensation, p: &ModelParams) -> Thresholds {
    let extra = comp.rho() * p.f;
    let ho = p.c_h / (p.beta + extra);
    let a = p.quality_weight() * quality;
    let (lo, hi) = if a <= p.c_a + price - p.ai_skill_slope() * ho {
        (ho, ho)
    } else {
        let ha = crossing(a + p.c_h - p.c_a - price, p.human_ai_slope_gap() + extra);
        (x_ao(quality, price, p), ha)
    };
    Thresholds { lo: clamp01(lo), hi: clamp01(hi), regime: comp }
}

/// Period-1 thresholds when every human work is sold for training at `f`.
pub fn full_comp_thresholds(p: &ModelParams) -> Thresholds {
    let ho = p.c_h / (p.beta + p.f);
    let ha = crossing(p.c_h - p.c_a + p.quality_weight() * p.x1, p.human_ai_slope_gap() + p.f).min(1.0);
    // X1 <= X_A^F
    let (lo, hi) = if p.quality_weight() * p.x1 <= p.c_a - p.ai_skill_slope() * ho {
        (ho, ho)
    } else {
        (x_ao(p.x1, 0.0, p).max(0.0), ha)
    };
    Thresholds { lo: clamp01(lo), hi: clamp01(hi), regime: Compensation::Full }
}

/// Rational-expectations thresholds when the firm is expected to buy `q_c`
/// units out of the pool `Q0 + Q_1H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialComp {
    pub thresholds: Thresholds,
    pub x_ho: f64,
    pub x_ha: f64,
    /// Quality above which nobody prefers human over AI creation.
    pub x_h: f64,
    /// Quality at or below which nobody uses AI.
    pub x_a: f64,
    pub residual_ho: f64,
    /// `None` when `x_ha` was set to 1 without solving.
    pub residual_ha: Option<f64>,
}

/// Acquisition probability `2 Q_C / (2 Q0 + 1 - x^2)` when the human
/// threshold is `x`.
pub fn acquisition_probability(q_c: f64, q0: f64, x_hi: f64) -> f64 {
    let pool = 2.0 * q0 + 1.0 - x_hi * x_hi;
    if pool > 0.0 {
        2.0 * q_c / pool
    } else if q_c > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Left side of the implicit equation for the human-over-nothing threshold.
pub fn partial_ho_residual(x: f64, q_c: f64, q0: f64, p: &ModelParams) -> f64 {
    (p.beta + acquisition_probability(q_c, q0, x) * p.f) * x - p.c_h
}

/// Left side of the implicit equation for the human-over-AI threshold.
pub fn partial_ha_residual(x: f64, q_c: f64, q0: f64, p: &ModelParams) -> f64 {
    (p.human_ai_slope_gap() + acquisition_probability(q_c, q0, x) * p.f) * x
        - p.quality_weight() * p.x1
        - (p.c_h - p.c_a)
}

pub fn partial_comp_thresholds(q_c: f64, p: &ModelParams) -> Result<PartialComp, ModelError> {
    let q0 = match p.q0 {
        DataStock::Finite(q0) => q0,
        DataStock::Infinite => return Err(ModelError::Domain("finite Q0")),
    };
    if !(q_c > 0.0) {
        return Err(ModelError::Domain("Q_C > 0"));
    }
    if !(p.f > 0.0) {
        return Err(ModelError::Domain("f > 0"));
    }

    let g_ho = |x: f64| partial_ho_residual(x, q_c, q0, p);
    let ho_f = p.c_h / (p.beta + p.f);
    let lo = if g_ho(ho_f) < 0.0 { ho_f } else { 0.0 };
    let x_ho = root_increasing("human-over-nothing threshold", g_ho, lo, 1.0, IMPLICIT_RESIDUAL_TOL)?;

    let w = p.quality_weight();
    let rho_at_top = if q0 > 0.0 { q_c / q0 } else { f64::INFINITY };
    let top_gap = p.human_ai_slope_gap() + rho_at_top * p.f - (p.c_h - p.c_a);
    let x_h = if w > 0.0 { top_gap / w } else { crossing(top_gap, 0.0) };

    let g_ha = |x: f64| partial_ha_residual(x, q_c, q0, p);
    let ha_f = crossing(p.c_h - p.c_a + w * p.x1, p.human_ai_slope_gap() + p.f);
    let (x_ha, residual_ha) = if w * p.x1 >= top_gap || ha_f >= 1.0 {
        (1.0, None)
    } else {
        let lo = if ha_f > 0.0 && g_ha(ha_f) < 0.0 { ha_f } else { 0.0 };
        let x = root_increasing("human-over-AI threshold", g_ha, lo, 1.0, IMPLICIT_RESIDUAL_TOL)?;
        (x, Some(g_ha(x).abs()))
    };

    let x_a_num = p.c_a - p.ai_skill_slope() * x_ho;
    let x_a = if w > 0.0 { x_a_num / w } else { crossing(x_a_num, 0.0) };
    let (t_lo, t_hi) = if w * p.x1 <= x_a_num {
        (x_ho, x_ho)
    } else {
        (x_ao(p.x1, 0.0, p).max(0.0), x_ha)
    };
    let rho = acquisition_probability(q_c, q0, t_hi);
    Ok(PartialComp {
        thresholds: Thresholds { lo: clamp01(t_lo), hi: clamp01(t_hi), regime: Compensation::Partial { rho } },
        x_ho,
        x_ha,
        x_h,
        x_a,
        residual_ho: g_ho(x_ho).abs(),
        residual_ha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Regime;
    use proptest::prelude::*;

    fn paper() -> ModelParams {
        ModelParams::paper(Regime::Scarce)
    }

    /// Direct pointwise argmax on a skill grid.
    fn brute_thresholds(quality: f64, price: f64, comp: Compensation, p: &ModelParams, n: usize) -> (f64, f64) {
        let mut lo = None;
        let mut hi = None;
        for i in 0..n {
            let x = i as f64 / (n - 1) as f64;
            match best_choice(utility_ai(x, quality, price, p), utility_human(x, comp, p)) {
                Choice::Human => {
                    lo.get_or_insert(x);
                    hi.get_or_insert(x);
                }
                Choice::Ai => {
                    lo.get_or_insert(x);
                }
                Choice::None => {}
            }
        }
        (lo.unwrap_or(1.0), hi.unwrap_or(1.0))
    }

    #[test]
    fn utility_examples() {
        let p = ModelParams { f: 0.2, ..paper() };
        assert!(utility_human(0.5, Compensation::NoTrainingIncome, &p).abs() < 1e-15);
        assert!((utility_human(0.5, Compensation::Full, &p) - 0.1).abs() < 1e-15);
        assert!((utility_human(0.5, Compensation::Partial { rho: 0.5 }, &p) - 0.05).abs() < 1e-15);
        assert!((utility_ai(0.0, 0.0, 0.0, &p) + 0.05).abs() < 1e-15);
        assert!((utility_ai(1.0, 1.0, 0.0, &p) - 0.31).abs() < 1e-15);
        assert!((utility_ai(0.5, 0.4, 0.0, &p) - 0.1084).abs() < 1e-15);
    }

    #[test]
    fn base_examples() {
        let p = paper();
        let b = quality_breakpoints(0.0, &p);
        assert!((b.x_n - 0.231_481_481_481_481_5).abs() < 1e-12);
        assert!((b.x_h - 0.953_703_703_703_703_7).abs() < 1e-12);

        let t = base_thresholds(0.4, 0.0, &p);
        assert_eq!(t.lo, 0.0);
        assert!((t.hi - 0.737_719_298_245_614).abs() < 1e-12);
        let (blo, bhi) = brute_thresholds(0.4, 0.0, Compensation::NoTrainingIncome, &p, 10_001);
        assert!((blo - t.lo).abs() <= 1e-4 && (bhi - t.hi).abs() <= 1e-4);

        // X_A(0) > 0 needs c_A > (1 - lambda) phi c_H: use a low phi
        let q = ModelParams { phi: 0.3, ..p };
        assert!(quality_breakpoints(0.0, &q).x_a > 0.1);
        let t = base_thresholds(0.1, 0.0, &q);
        assert_eq!((t.lo, t.hi), (0.5, 0.5));

        let t = base_thresholds(1.0, 0.0, &p);
        assert_eq!((t.lo, t.hi), (0.0, 1.0));
    }

    #[test]
    fn full_comp_examples() {
        let p = ModelParams { f: 0.2, ..paper() };
        assert!((p.c_h / (p.beta + p.f) - 0.375).abs() < 1e-15);
        let t = full_comp_thresholds(&p);
        assert!((t.hi - 0.512_804_878_048_780_5).abs() < 1e-12);
        assert_eq!(t.lo, 0.0);
        let tiny = ModelParams { f: 1e-12, ..p };
        let a = full_comp_thresholds(&tiny);
        let b = base_thresholds(p.x1, 0.0, &tiny);
        assert!((a.lo - b.lo).abs() < 1e-9 && (a.hi - b.hi).abs() < 1e-9);
    }

    #[test]
    fn lambda_one_uses_indicator() {
        let p = ModelParams { lambda: 1.0, ..paper() };
        // phi beta X = 0.36 * 0.4 = 0.144 >= c_A: everybody below x_HA uses AI
        let t = base_thresholds(0.4, 0.0, &p);
        assert_eq!(t.lo, 0.0);
        // phi beta X = 0.036 < c_A: no AI
        let t = base_thresholds(0.1, 0.0, &p);
        assert_eq!((t.lo, t.hi), (0.5, 0.5));
    }

    #[test]
    fn partial_small_demand_tends_to_base() {
        let p = ModelParams { f: 0.2, ..paper() };
        let pc = partial_comp_thresholds(1e-12, &p).unwrap();
        let b = base_thresholds(p.x1, 0.0, &p);
        assert!((pc.thresholds.hi - b.hi).abs() < 1e-9);
        assert!(pc.thresholds.regime.rho() < 1e-9);
    }

    #[test]
    fn partial_paper_point_residuals() {
        let p = ModelParams { f: 0.2, ..paper() };
        let pc = partial_comp_thresholds(0.1, &p).unwrap();
        assert!(pc.residual_ho < 1e-10);
        assert!(pc.residual_ha.unwrap() < 1e-10);
        let f = full_comp_thresholds(&p);
        assert!(pc.x_ha > f.hi && pc.x_ha <= 1.0);
        assert!(pc.x_ho > p.c_h / (p.beta + p.f) && pc.x_ho < 1.0);
        let rho = pc.thresholds.regime.rho();
        assert!(rho > 0.0 && rho < 1.0);
        // x_HA^P solves the best-response problem at its own rho
        let direct = thresholds_with_income(p.x1, 0.0, Compensation::Partial { rho }, &p);
        assert!((direct.hi - pc.thresholds.hi).abs() < 1e-12);
    }

    #[test]
    fn partial_requires_finite_stock_and_demand() {
        let p = ModelParams { f: 0.2, ..paper() };
        assert!(partial_comp_thresholds(0.0, &p).is_err());
        let a = ModelParams { q0: DataStock::Infinite, ..p };
        assert!(partial_comp_thresholds(0.1, &a).is_err());
    }

    fn arb_params() -> impl Strategy<Value = ModelParams> {
        (0.05f64..0.95, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.05f64..1.0, 0.0f64..1.0, 0.0f64..0.5)
            .prop_map(|(beta, a, b, lambda, phi, x1, f)| {
                let c_h = beta * (0.02 + 0.96 * a);
                let c_a = c_h * (0.02 + 0.96 * b);
                ModelParams { beta, c_h, c_a, lambda, phi, x1, f, ..ModelParams::paper(Regime::Scarce) }
            })
    }

    proptest! {
        #[test]
        fn table_matches_direct_route(p in arb_params(), x in 0.0f64..1.0, price in 0.0f64..0.3) {
            let t = base_thresholds(x, price, &p);
            let d = thresholds_with_income(x, price, Compensation::NoTrainingIncome, &p);
            prop_assert!((t.lo - d.lo).abs() < 1e-12 && (t.hi - d.hi).abs() < 1e-12, "{:?} vs {:?}", t, d);
        }

        #[test]
        fn thresholds_ordered_and_bounded(p in arb_params(), x in 0.0f64..1.0, price in 0.0f64..0.3) {
            let t = base_thresholds(x, price, &p);
            prop_assert!(0.0 <= t.lo && t.lo <= t.hi && t.hi <= 1.0);
            let f = full_comp_thresholds(&p);
            prop_assert!(0.0 <= f.lo && f.lo <= f.hi && f.hi <= 1.0);
        }

        #[test]
        fn breakpoint_ordering(p in arb_params(), price in 0.0f64..0.3) {
            let b = quality_breakpoints(price, &p);
            prop_assert!(b.x_a <= b.x_n.min(b.x_h) + 1e-12);
        }

        #[test]
        fn pointwise_optimality(p in arb_params(), x in 0.0f64..1.0, price in 0.0f64..0.3) {
            let t = base_thresholds(x, price, &p);
            let h = 1e-4;
            for i in 0..=1000 {
                let s = i as f64 / 1000.0;
                if (s - t.lo).abs() < h || (s - t.hi).abs() < h {
                    continue;
                }
                let c = best_choice(utility_ai(s, x, price, &p), utility_human(s, Compensation::NoTrainingIncome, &p));
                prop_assert_eq!(c, t.choice_at(s), "skill {}", s);
            }
        }

        #[test]
        fn monotone_in_quality_and_price(p in arb_params(), a in 0.0f64..1.0, b in 0.0f64..1.0, price in 0.0f64..0.3) {
            let (x_lo, x_hi) = if a < b { (a, b) } else { (b, a) };
            let t_lo = base_thresholds(x_lo, price, &p);
            let t_hi = base_thresholds(x_hi, price, &p);
            prop_assert!(t_hi.hi >= t_lo.hi - 1e-12);
            prop_assert!(t_hi.lo <= t_lo.lo + 1e-12);
            let cheap = base_thresholds(x_lo, price * 0.5, &p);
            prop_assert!(cheap.hi >= t_lo.hi - 1e-12);
            prop_assert!(cheap.lo <= t_lo.lo + 1e-12);
        }

        #[test]
        fn partial_thresholds_bracketed(p in arb_params(), share in 0.01f64..0.99, q0 in 0.0f64..0.5) {
            prop_assume!(p.f > 1e-3);
            let p = ModelParams { q0: DataStock::Finite(q0), ..p };
            let full = full_comp_thresholds(&p);
            let supply = q0 + full.human_share();
            prop_assume!(supply > 1e-6);
            let q_c = share * supply;
            let pc = partial_comp_thresholds(q_c, &p).unwrap();
            prop_assert!(pc.residual_ho < IMPLICIT_RESIDUAL_TOL);
            if let Some(r) = pc.residual_ha {
                prop_assert!(r < IMPLICIT_RESIDUAL_TOL);
            }
            prop_assert!(pc.x_ho < 1.0 && pc.x_ha <= 1.0);
            // each root lies above its full-compensation counterpart whenever
            // the demand fits in the pool that counterpart would create
            let ho_f = p.c_h / (p.beta + p.f);
            if q_c <= q0 + 0.5 * (1.0 - ho_f * ho_f) {
                prop_assert!(pc.x_ho > ho_f - 1e-12);
            }
            let ha_f = (p.c_h - p.c_a + p.quality_weight() * p.x1) / (p.human_ai_slope_gap() + p.f);
            if ha_f < 1.0 && q_c <= q0 + 0.5 * (1.0 - ha_f * ha_f) {
                prop_assert!(pc.x_ha > ha_f - 1e-12);
            }
            prop_assert!(pc.thresholds.regime.rho() <= 1.0 + 1e-9);
        }
    }
}
