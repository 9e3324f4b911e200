//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion and
//! exits non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use copyright_eq::creator::{base_thresholds, partial_comp_thresholds, partial_ho_residual, IMPLICIT_RESIDUAL_TOL};
use copyright_eq::firm::{max_price, revenue};
use copyright_eq::metrics::period_outcome;
use copyright_eq::oracle::{best_respond, firm_grid_search, random_params, threshold_checks, AgentGrid, CheckOptions};
use copyright_eq::policy::{default_f_grid, default_phi_grid, figure, frontier, step_grid, Objective, Param, DEFAULT_F_MAX};
use copyright_eq::{solve, Choice, DataStock, EquilibriumReport, ModelParams, Regime, Scenario};

const SEED: u64 = 20_240_601;
const AGENTS: usize = 10_001;
const THRESHOLD_TOL: f64 = 2e-4;
const NOISE: f64 = 1e-9;
const Q_1H_SCARCE: f64 = 0.227_885_118_497_999_4;
const X2_SCARCE: f64 = 0.807_998_331_378_662_6;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn abundant() -> ModelParams {
    ModelParams::paper(Regime::Abundant)
}

fn scarce() -> ModelParams {
    ModelParams::paper(Regime::Scarce)
}

fn solved(p: &ModelParams) -> Result<EquilibriumReport, String> {
    solve(p).map_err(|e| e.to_string())
}

fn oracle_draws() -> Vec<ModelParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut draws: Vec<ModelParams> = (0..50).map(|_| random_params(&mut rng, None)).collect();
    draws.push(abundant());
    draws.push(scarce());
    draws
}

/// Criteria 1 and 2 share one oracle run.
fn thresholds_and_structure() -> (Verdict, Verdict) {
    let draws = oracle_draws();
    let opts = CheckOptions { agents: AGENTS, ..Default::default() };
    let (mut worst, mut worst_at) = (0.0_f64, String::new());
    let (mut checks, mut unordered, mut too_many, mut unsolved) = (0, 0, 0, 0);
    let mut max_switches = 0;
    for (i, p) in draws.iter().enumerate() {
        let Ok(r) = solve(p) else {
            unsolved += 1;
            continue;
        };
        for c in threshold_checks(p, r.firm.x2, r.firm.p2, opts) {
            checks += 1;
            if c.distance > worst {
                worst = c.distance;
                worst_at = format!("draw {i} {}", c.label);
            }
            unordered += usize::from(!c.skill_ordered);
            too_many += usize::from(c.switch_points > 2);
            max_switches = max_switches.max(c.switch_points);
        }
    }
    let c1 = verdict(
        unsolved == 0 && worst <= THRESHOLD_TOL,
        format!(
            "{} draws, {checks} regimes, sup distance {worst:.3e} (tol {THRESHOLD_TOL:e}) at {worst_at}, {unsolved} unsolved",
            draws.len()
        ),
    );
    let c2 = verdict(
        unsolved == 0 && unordered == 0 && too_many == 0,
        format!("{checks} regimes, {unordered} out of skill order, {too_many} with more than 2 switches, max {max_switches}"),
    );
    (c1, c2)
}

fn corollary_numerics() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut draws = vec![abundant(), scarce()];
    draws.extend((0..20).map(|_| random_params(&mut rng, None)));
    let xs = step_grid(0.0, 1.0, 0.01);
    let (mut worst_qa, mut worst_u, mut worst_curv) = (0.0_f64, 0.0_f64, f64::NEG_INFINITY);
    let mut concave_cases = 0;
    for p in &draws {
        for price in [0.0, 0.01, 0.03, 0.1] {
            let outs: Vec<_> =
                xs.iter().map(|&x| period_outcome(&base_thresholds(x, price, p), x, price, p.m, p, None)).collect();
            for w in outs.windows(2) {
                worst_qa = worst_qa.min(w[1].q_a - w[0].q_a);
                worst_u = worst_u.min(w[1].u - w[0].u);
            }
        }
        for &x in &xs {
            let top = max_price(x, p);
            if top.is_nan() || top < 0.0 {
                continue;
            }
            concave_cases += 1;
            let rs: Vec<f64> = step_grid(0.0, 1.0, 0.005).iter().map(|t| revenue(x, t * top, p)).collect();
            for w in rs.windows(3) {
                worst_curv = worst_curv.max(w[2] - 2.0 * w[1] + w[0]);
            }
        }
    }
    verdict(
        worst_qa >= -NOISE && worst_u >= -NOISE && worst_curv <= NOISE,
        format!(
            "{} draws: min dQ_A {worst_qa:.3e}, min du {worst_u:.3e}, max revenue second difference {worst_curv:.3e} over {concave_cases} qualities",
            draws.len()
        ),
    )
}

/// Period-2 welfare, surplus and creator utility from agent choices.
fn oracle_period2(p: &ModelParams, quality: f64, price: f64) -> (f64, f64, f64) {
    let mut g = AgentGrid::new(AGENTS);
    best_respond(&mut g, quality, price, 0.0, p);
    let h = g.cell();
    let (mut q_h, mut q_a, mut human, mut ai) = (0.0, 0.0, 0.0, 0.0);
    for (i, (&x, &c)) in g.skills.iter().zip(&g.choices).enumerate() {
        let wgt = if i == 0 || i + 1 == g.n() { 0.5 * h } else { h };
        match c {
            Choice::Human => {
                q_h += wgt * x;
                human += wgt;
            }
            Choice::Ai => {
                q_a += wgt * (p.lambda * quality + (1.0 - p.lambda) * x);
                ai += wgt;
            }
            Choice::None => {}
        }
    }
    let (q_h, q_a) = (p.m * q_h, p.m * q_a);
    let w = q_h + q_a - p.m * (p.c_h * human + p.c_a * ai);
    let s = (1.0 - p.beta) * q_h + (1.0 - p.phi * p.beta) * q_a;
    let u = p.beta * (q_h + p.phi * q_a) - p.m * (p.c_h * human + (p.c_a + price) * ai);
    (w, s, u)
}

fn abundant_corner() -> Verdict {
    let p = ModelParams { f: 0.0, ..abundant() };
    let r = match solved(&p) {
        Ok(r) => r,
        Err(e) => return verdict(false, e),
    };
    let o = &r.outcome2;
    let got = [r.firm.x2, r.firm.p2, o.w, o.s, o.u];
    let want = [1.0, 0.0, 1.5, 1.024, 0.476];
    let exact = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (ow, os, ou) = oracle_period2(&p, r.firm.x2, r.firm.p2);
    let oracle_gap = [ow - o.w, os - o.s, ou - o.u].iter().map(|d| d.abs()).fold(0.0, f64::max);
    let oracle_tol = 2.0 * p.m / (AGENTS - 1) as f64;
    let (mut worst, mut worst_f, mut failed) = (f64::INFINITY, 0.0, 0);
    for f in default_f_grid(DEFAULT_F_MAX) {
        match solve(&ModelParams { f, ..p }) {
            Ok(rf) => {
                let d = o.w - rf.outcome2.w;
                if d < worst {
                    worst = d;
                    worst_f = f;
                }
            }
            Err(_) => failed += 1,
        }
    }
    verdict(
        exact <= 1e-9 && oracle_gap <= oracle_tol && worst >= -NOISE && failed == 0,
        format!(
            "(X2,p2,w2,s2,u2)=({:.12},{:.12},{:.12},{:.12},{:.12}) max error {exact:.1e}, oracle gap {oracle_gap:.2e}, min w2(0)-w2(f) {worst:.3e} at f={worst_f}",
            got[0], got[1], got[2], got[3], got[4]
        ),
    )
}

fn prohibitive_fee() -> Verdict {
    let base = ModelParams { f: 0.0, ..scarce() };
    let (r0, r1) = match (solved(&base), solved(&ModelParams { f: 1e3, ..base })) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return verdict(false, e),
    };
    let (a, b) = (&r0.outcome1, &r1.outcome1);
    let diff = [a.q_h - b.q_h, a.q_a - b.q_a, a.u - b.u, a.s - b.s, a.w - b.w, a.r - b.r]
        .iter()
        .map(|d| d.abs())
        .fold(0.0, f64::max);
    let x_gap = (r1.firm.x2 - base.x1).abs();
    verdict(
        x_gap <= 1e-9 && diff <= 1e-9,
        format!("X2-X1 {x_gap:.1e}, max Period-1 metric difference {diff:.1e}, scenario {}", r1.period1.scenario.name()),
    )
}

fn scarce_chain() -> Verdict {
    let r = match solved(&ModelParams { f: 0.0, ..scarce() }) {
        Ok(r) => r,
        Err(e) => return verdict(false, e),
    };
    let (q, x) = (r.period1.q_1h, r.firm.x2);
    let dq = (q - Q_1H_SCARCE).abs();
    let dx = (x - X2_SCARCE).abs();
    verdict(
        dq <= 1e-6 && dx <= 1e-6,
        format!(
            "Q_1H={q:.12} (|d|={dq:.1e}), X2={x:.12} (|d|={dx:.1e}); distance to rounded 0.22788/0.80801: {:.1e}/{:.1e}",
            (q - 0.22788).abs(),
            (x - 0.80801).abs()
        ),
    )
}

fn phi_monotonicity() -> Verdict {
    let base = ModelParams { f: 0.0, ..scarce() };
    let mut rows = Vec::new();
    for phi in step_grid(base.phi_min, 1.0, 0.01) {
        match solve(&ModelParams { phi, ..base }) {
            Ok(r) => rows.push((r.outcome1.q_a, r.outcome1.u, r.firm.x2)),
            Err(e) => return verdict(false, format!("phi={phi}: {e}")),
        }
    }
    let (mut dqa, mut du, mut dx) = (0.0_f64, 0.0_f64, 0.0_f64);
    for w in rows.windows(2) {
        dqa = dqa.min(w[1].0 - w[0].0);
        du = du.min(w[1].1 - w[0].1);
        dx = dx.max(w[1].2 - w[0].2);
    }
    verdict(
        dqa >= -NOISE && du >= -NOISE && dx <= NOISE,
        format!("{} points: min dQ_1A {dqa:.3e}, min du1 {du:.3e}, max dX2 {dx:.3e}", rows.len()),
    )
}

/// Sign changes of first differences, ignoring steps within noise, and
/// whether the curve never rises after it starts falling.
fn shape(ys: &[f64]) -> (usize, bool) {
    let signs: Vec<i8> = ys
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| d.abs() > NOISE)
        .map(|d| if d > 0.0 { 1 } else { -1 })
        .collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let unimodal = signs.iter().skip_while(|&&s| s > 0).all(|&s| s < 0);
    (changes, unimodal)
}

fn fig7a_shape() -> Verdict {
    let Some(panels) = figure("fig7a", DEFAULT_F_MAX) else {
        return verdict(false, "fig7a recipe missing");
    };
    let data = match panels[0].run() {
        Ok(d) => d,
        Err(e) => return verdict(false, e.to_string()),
    };
    let mut pass = data.series.len() == 3;
    let mut parts = Vec::new();
    for s in &data.series {
        let (changes, unimodal) = shape(&s.ys);
        let nan = s.ys.iter().any(|y| y.is_nan());
        pass &= unimodal && changes == 1 && !nan;
        let peak = s.ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        parts.push(format!("{}: {changes} sign change(s), peak {peak:.4}", s.label));
    }
    verdict(pass, parts.join("; "))
}

fn frontier_ordering() -> Verdict {
    let base = scarce();
    let f_grid = default_f_grid(DEFAULT_F_MAX);
    let phi_grid = default_phi_grid(base.phi_min);
    let axes: [(Param, Vec<f64>); 3] =
        [(Param::X1, vec![0.3, 0.4, 0.5]), (Param::M, vec![1.5, 2.0, 3.0]), (Param::K, vec![3.0, 5.0, 7.0])];
    let mut points = 0;
    let mut violations = Vec::new();
    let mut failures = 0;
    for (param, values) in &axes {
        // The preset value is solved once, on the first axis.
        let values: Vec<f64> =
            if *param == Param::X1 { values.clone() } else { values.iter().copied().filter(|&v| v != param.get(&base)).collect() };
        let rows = match frontier(&base, Regime::Scarce, *param, &values, &f_grid, &phi_grid) {
            Ok(rows) => rows,
            Err(e) => return verdict(false, e.to_string()),
        };
        for row in rows {
            points += 1;
            failures += row.failures;
            let (w, cs, ai) = (
                row.policy(Objective::Welfare),
                row.policy(Objective::ConsumerSurplus),
                row.policy(Objective::AiDevelopment),
            );
            let mut broken = Vec::new();
            if ai.f_star < w.f_star {
                broken.push(format!("f*(AI)={} < f*(W)={}", ai.f_star, w.f_star));
            }
            if w.f_star < cs.f_star {
                broken.push(format!("f*(W)={} < f*(CS)={}", w.f_star, cs.f_star));
            }
            if cs.phi_star > w.phi_star {
                broken.push(format!("phi*(CS)={} > phi*(W)={}", cs.phi_star, w.phi_star));
            }
            if !broken.is_empty() {
                violations.push(format!("{}={}: {}", param.name(), row.value, broken.join(", ")));
            }
        }
    }
    let detail = if violations.is_empty() {
        format!("{points} structural points ordered, {failures} failed solves")
    } else {
        format!("{}/{points} points violate: {}", violations.len(), violations.join("; "))
    };
    verdict(violations.is_empty() && failures == 0, detail)
}

fn firm_vs_grid() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    let (mut tested, mut bad, mut unsolved) = (0, Vec::new(), 0);
    let (mut worst_x, mut worst_p) = (0.0_f64, 0.0_f64);
    while tested < 20 {
        let p = random_params(&mut rng, None);
        if p.f <= 0.0 {
            continue;
        }
        tested += 1;
        let Ok(r) = solve(&p) else {
            unsolved += 1;
            continue;
        };
        let g = firm_grid_search(&p, r.data_cap, 2001, 2001);
        let dx = (r.firm.x2 - g.decision.x2).abs();
        let dp = (r.firm.p2 - g.decision.p2).abs();
        let (rx, rp) = (dx / g.x_cell.max(f64::MIN_POSITIVE), dp / g.p_cell.max(f64::MIN_POSITIVE));
        worst_x = worst_x.max(if dx == 0.0 { 0.0 } else { rx });
        worst_p = worst_p.max(if dp == 0.0 { 0.0 } else { rp });
        if dx > g.x_cell + 1e-12 || dp > g.p_cell + 1e-12 {
            bad.push(format!("draw {tested}: dX {dx:.2e} (cell {:.2e}), dp {dp:.2e} (cell {:.2e})", g.x_cell, g.p_cell));
        }
    }
    verdict(
        bad.is_empty() && unsolved == 0,
        format!(
            "{tested} draws, {unsolved} unsolved, worst gap {worst_x:.3} x-cells / {worst_p:.3} p-cells{}",
            if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
        ),
    )
}

fn partial_residuals() -> Verdict {
    let mut points: Vec<ModelParams> = Vec::new();
    for f in step_grid(0.01, 0.5, 0.01) {
        for phi in step_grid(0.05, 1.0, 0.05) {
            points.push(ModelParams { f, phi, ..scarce() });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    while points.len() < 1500 {
        let mut p = random_params(&mut rng, None);
        if let DataStock::Finite(_) = p.q0 {
            p.f = p.f.max(0.01);
            points.push(p);
        }
    }
    let (mut partial, mut worst, mut errors) = (0, 0.0_f64, 0);
    for p in &points {
        let r = match solve(p) {
            Ok(r) => r,
            Err(_) => {
                errors += 1;
                continue;
            }
        };
        let s = &r.period1;
        if s.scenario != Scenario::Partial {
            continue;
        }
        partial += 1;
        let q0 = match p.q0 {
            DataStock::Finite(q) => q,
            DataStock::Infinite => continue,
        };
        let mut res = [s.residual_ho.unwrap_or(f64::INFINITY), s.residual_ha.unwrap_or(0.0)];
        if let Ok(pc) = partial_comp_thresholds(s.q_c, p) {
            res[0] = res[0].max(partial_ho_residual(pc.x_ho, s.q_c, q0, p).abs());
        }
        worst = worst.max(res[0].abs()).max(res[1].abs());
    }
    verdict(
        partial > 0 && worst < IMPLICIT_RESIDUAL_TOL && worst < 1e-10,
        format!("{} solves, {partial} PARTIAL, worst residual {worst:.2e}, {errors} solver errors", points.len()),
    )
}

fn sweep_determinism() -> Verdict {
    let args = [
        "copyright-eq",
        "sweep",
        "--preset",
        "paper-scarce",
        "--vary",
        "f=0:0.3:0.05",
        "--vary",
        "phi=0.05:1:0.05",
    ];
    let run = || {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = copyright_eq_cli::main_with(args, &mut out, &mut err);
        (code, String::from_utf8_lossy(&out).into_owned())
    };
    let mask = |s: &str| s.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect::<String>();
    let (c1, a) = run();
    let (c2, b) = run();
    let (a, b) = (mask(&a), mask(&b));
    let rows = a.lines().count().saturating_sub(1);
    verdict(
        c1 == 0 && c2 == 0 && rows > 0 && a.as_bytes() == b.as_bytes(),
        format!("exit codes {c1}/{c2}, {rows} rows, {} bytes, identical: {}", a.len(), a == b),
    )
}

fn main() -> ExitCode {
    let names = [
        "threshold oracle equivalence",
        "double-threshold structure",
        "quality and price numerics",
        "abundant generous corner",
        "prohibitive fee corner",
        "scarce generous chain",
        "phi monotonicity",
        "fig7a shape",
        "scarce frontier ordering",
        "firm solver vs grid",
        "implicit residuals",
        "sweep determinism",
    ];
    let mut results: Vec<(usize, Verdict)> = Vec::new();
    let mut record = |i: usize, v: Verdict, secs: f64| {
        println!("[{}] {:>2} {}: {} ({secs:.1}s)", if v.pass { "PASS" } else { "FAIL" }, i + 1, names[i], v.detail);
        results.push((i, v));
    };

    let t = Instant::now();
    let (c1, c2) = thresholds_and_structure();
    let secs = t.elapsed().as_secs_f64();
    record(0, c1, secs);
    record(1, c2, secs);
    let checks: [fn() -> Verdict; 10] = [
        corollary_numerics,
        abundant_corner,
        prohibitive_fee,
        scarce_chain,
        phi_monotonicity,
        fig7a_shape,
        frontier_ordering,
        firm_vs_grid,
        partial_residuals,
        sweep_determinism,
    ];
    for (i, check) in checks.iter().enumerate() {
        let t = Instant::now();
        let v = check();
        record(i + 2, v, t.elapsed().as_secs_f64());
    }

    let failed: Vec<String> = results.iter().filter(|r| !r.1.pass).map(|r| (r.0 + 1).to_string()).collect();
    println!("acceptance: {}/{} passed{}", results.len() - failed.len(), results.len(), if failed.is_empty() {
        String::new()
    } else {
        format!(", failing: {}", failed.join(", "))
    });
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
