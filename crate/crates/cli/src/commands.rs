use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use copyright_eq::equilibrium::describe;
use copyright_eq::oracle::{random_params, threshold_checks, CheckOptions, DEFAULT_AGENTS};
use copyright_eq::policy::{
    default_f_grid, default_phi_grid, figure, frontier, sweep, Metric, OptimalPolicy, PanelData, PolicySurface, SweepSpec,
    DEFAULT_F_MAX, FIGURE_IDS,
};
use copyright_eq::{solve, DataStock, EquilibriumReport, ModelParams, Regime};

use crate::config::{self, parse_axis, parse_grid, parse_metrics, parse_objectives, ConfigError, ModelArgs, Resolved};
use crate::svg::line_chart;
use crate::table::{run_metadata, Cell, ResultTable};

pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Failure {
        Failure { code: EXIT_CONFIG, message: e.0 }
    }
}

fn config_err(msg: impl fmt::Display) -> Failure {
    Failure { code: EXIT_CONFIG, message: msg.to_string() }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_CONFIG, message: format!("{}: {e}", path.display()) }
}

#[derive(Debug, Parser)]
#[command(name = "copyright-eq", version, about = "Equilibrium solver and policy lab for the generative-AI copyright game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one parameter point and print the report.
    Solve(SolveArgs),
    /// Evaluate metrics over a grid of parameter values.
    Sweep(SweepArgs),
    /// Reproduce a bundled figure as CSV and SVG per panel.
    Figure(FigureArgs),
    /// Optimal (f, phi) per objective, optionally along a structural frontier.
    Optimize(OptimizeArgs),
    /// Compare closed-form thresholds against agent best responses.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Also write the full report as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// `name=lo:hi:step` or `name=a,b,c`; repeat for more axes, first is slowest.
    #[arg(long)]
    pub vary: Vec<String>,
    /// Comma-separated metric names.
    #[arg(long)]
    pub metrics: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_metadata: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure (`fig7`) or panel (`fig7a`) id.
    pub id: String,
    #[arg(long, default_value = "figures")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub f_max: Option<f64>,
    #[arg(long)]
    pub no_metadata: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// `welfare`, `consumer-surplus`, `ai-development` or `all`.
    #[arg(long)]
    pub objective: Option<String>,
    #[arg(long)]
    pub f_grid: Option<String>,
    #[arg(long)]
    pub phi_grid: Option<String>,
    #[arg(long)]
    pub f_max: Option<f64>,
    /// Structural axis, e.g. `X1=0.3,0.4,0.5` or `k=3:7:1`.
    #[arg(long)]
    pub frontier: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_metadata: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Agents on the skill grid.
    #[arg(long)]
    pub agents: Option<usize>,
    /// Random parameter draws checked in addition to the configured point.
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Shift every closed-form upper threshold by this much (fault injection).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, hide = true)]
    pub corrupt_hi: f64,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Figure(a) => cmd_figure(&a, out),
        Command::Optimize(a) => cmd_optimize(&a, out),
        Command::OracleCheck(a) => cmd_oracle_check(&a, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure { code: EXIT_CONFIG, message: format!("write: {e}") })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn solve_or_fail(p: &ModelParams) -> Result<EquilibriumReport, Failure> {
    solve(p).map_err(|e| Failure { code: EXIT_SOLVER, message: format!("solver failure: {e}") })
}

pub fn render_report(r: &EquilibriumReport) -> String {
    let p1 = &r.period1;
    let mut lines = vec![
        format!("point={}", describe(&r.params)),
        format!("scenario={}", p1.scenario.name()),
        format!("rho={}", r.rho()),
        format!("x_lo1={}", p1.thresholds.lo),
        format!("x_hi1={}", p1.thresholds.hi),
        format!("Q1H={}", r.outcome1.q_h),
        format!("Q1A={}", r.outcome1.q_a),
        format!("u1={}", r.outcome1.u),
        format!("s1={}", r.outcome1.s),
        format!("w1={}", r.outcome1.w),
        format!("X2={}", r.firm.x2),
        format!("p2={}", r.firm.p2),
        format!("binding={}", r.firm.binding.name()),
        format!("q_acquired={}", r.firm.q_acquired),
        format!("firm_profit={}", r.firm.profit),
        format!("x_lo2={}", r.period2.lo),
        format!("x_hi2={}", r.period2.hi),
        format!("Q2H={}", r.outcome2.q_h),
        format!("Q2A={}", r.outcome2.q_a),
        format!("u2={}", r.outcome2.u),
        format!("s2={}", r.outcome2.s),
        format!("w2={}", r.outcome2.w),
        format!("u={}", r.longterm.u),
        format!("s={}", r.longterm.s),
        format!("w={}", r.longterm.w),
    ];
    if let Some(x_f) = p1.x_f {
        lines.insert(3, format!("X_F={x_f}"));
        lines.insert(4, format!("X_C={}", p1.x_c));
    }
    lines.extend(r.warnings.iter().map(|w| format!("warning={w}")));
    lines.join("\n") + "\n"
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let Resolved { params, .. } = config::resolve(&a.model)?;
    let r = solve_or_fail(&params)?;
    emit(out, &render_report(&r))?;
    if let Some(path) = &a.json {
        let text = serde_json::to_string_pretty(&r).map_err(config_err)?;
        write_file(path, &(text + "\n"))?;
    }
    Ok(())
}

/// Builds the sweep spec from flags over file values.
pub fn sweep_spec(a: &SweepArgs) -> Result<(SweepSpec, Resolved), Failure> {
    let resolved = config::resolve(&a.model)?;
    let vary = if a.vary.is_empty() { resolved.file.vary() } else { a.vary.clone() };
    let varying = vary.iter().map(|s| parse_axis(s)).collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = match &a.metrics {
        Some(m) => m.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect(),
        None => resolved.file.metrics(),
    };
    let metrics = if names.is_empty() {
        Metric::ALL.to_vec()
    } else {
        parse_metrics(&names)?
    };
    let spec = SweepSpec { varying, base: resolved.params, regime: None, metrics };
    spec.validate().map_err(config_err)?;
    Ok((spec, resolved))
}

pub fn sweep_table(spec: &SweepSpec) -> Result<ResultTable, Failure> {
    let t = sweep(spec).map_err(config_err)?;
    let mut table = ResultTable::from_sweep(&t);
    table.metadata = run_metadata(&json!({ "command": "sweep", "spec": spec }).to_string());
    Ok(table)
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (spec, resolved) = sweep_spec(a)?;
    let table = sweep_table(&spec)?;
    let no_meta = a.no_metadata || resolved.file.no_metadata.unwrap_or(false);
    let text = table.to_csv(!no_meta);
    match a.out.clone().or(resolved.file.out) {
        Some(path) => {
            write_file(&path, &text)?;
            emit(out, &format!("wrote {} rows to {}\n", table.rows.len(), path.display()))
        }
        None => emit(out, &text),
    }
}

pub fn panel_table(d: &PanelData) -> ResultTable {
    let mut header = vec![d.x_label.clone()];
    header.extend(d.series.iter().map(|s| format!("{}[{}]", d.y_label, s.label)));
    let mut t = ResultTable::new(header);
    let n = d.series.first().map_or(0, |s| s.xs.len());
    for i in 0..n {
        let mut row = vec![Cell::Num(d.series[0].xs[i])];
        row.extend(d.series.iter().map(|s| Cell::Num(s.ys[i])));
        t.rows.push(row);
    }
    t
}

pub fn cmd_figure(a: &FigureArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let f_max = a.f_max.unwrap_or(DEFAULT_F_MAX);
    let panels = figure(&a.id, f_max)
        .ok_or_else(|| config_err(format!("unknown figure `{}` (known: {})", a.id, FIGURE_IDS.join(", "))))?;
    for panel in panels {
        let data = panel.run().map_err(config_err)?;
        let mut table = panel_table(&data);
        table.metadata = run_metadata(&json!({ "command": "figure", "panel": panel }).to_string());
        let csv_path = a.out_dir.join(format!("{}.csv", data.id));
        let svg_path = a.out_dir.join(format!("{}.svg", data.id));
        write_file(&csv_path, &table.to_csv(!a.no_metadata))?;
        write_file(&svg_path, &line_chart(&data))?;
        emit(out, &format!("{}: {} and {}\n", data.id, csv_path.display(), svg_path.display()))?;
    }
    Ok(())
}

fn policy_regime(q0: DataStock) -> Result<Regime, Failure> {
    match q0 {
        DataStock::Infinite => Ok(Regime::Abundant),
        DataStock::Finite(0.0) => Ok(Regime::Scarce),
        DataStock::Finite(q) => Err(config_err(format!(
            "optimize runs in the abundant (Q0 = inf) or scarce (Q0 = 0) regime, got Q0 = {q}"
        ))),
    }
}

fn policy_line(o: &OptimalPolicy) -> String {
    format!("objective={} f*={} phi*={} value={} ties={}", o.objective.name(), o.f_star, o.phi_star, o.value, o.ties)
}

pub fn cmd_optimize(a: &OptimizeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let resolved = config::resolve(&a.model)?;
    let file = &resolved.file;
    let p = resolved.params;
    let regime = policy_regime(p.q0)?;
    let objectives = parse_objectives(a.objective.as_deref().or(file.objective.as_deref()).unwrap_or("all"))?;
    let f_max = a.f_max.or(file.f_max).unwrap_or(DEFAULT_F_MAX);
    let f_grid = match a.f_grid.as_deref().or(file.f_grid.as_deref()) {
        Some(g) => parse_grid(g)?,
        None => default_f_grid(f_max),
    };
    let phi_grid = match a.phi_grid.as_deref().or(file.phi_grid.as_deref()) {
        Some(g) => parse_grid(g)?,
        None => default_phi_grid(p.phi_min),
    };
    let meta = json!({ "command": "optimize", "params": p, "f_grid": f_grid, "phi_grid": phi_grid });
    let no_meta = a.no_metadata || file.no_metadata.unwrap_or(false);

    let Some(axis) = a.frontier.as_deref().or(file.frontier.as_deref()) else {
        let surface = PolicySurface::compute(&p, regime, &f_grid, &phi_grid).map_err(config_err)?;
        if surface.failures == surface.values.len() {
            return Err(Failure { code: EXIT_SOLVER, message: format!("every grid point failed at {}", describe(&p)) });
        }
        let mut table = ResultTable::new(["objective", "f_star", "phi_star", "value", "ties"].map(String::from).to_vec());
        for &o in &objectives {
            let best = surface.optimum(o);
            emit(out, &(policy_line(&best) + "\n"))?;
            table.rows.push(vec![
                Cell::Text(o.name().into()),
                Cell::Num(best.f_star),
                Cell::Num(best.phi_star),
                Cell::Num(best.value),
                Cell::Num(best.ties as f64),
            ]);
        }
        if surface.failures > 0 {
            emit(out, &format!("warning={} grid points failed to solve\n", surface.failures))?;
        }
        if let Some(path) = a.out.clone().or(file.out.clone()) {
            table.metadata = run_metadata(&meta.to_string());
            write_file(&path, &table.to_csv(!no_meta))?;
        }
        return Ok(());
    };

    let axis = parse_axis(axis)?;
    let rows = frontier(&p, regime, axis.param, &axis.grid, &f_grid, &phi_grid).map_err(config_err)?;
    let mut table =
        ResultTable::new([axis.param.name(), "objective", "f_star", "phi_star", "value", "ties"].map(String::from).to_vec());
    for r in &rows {
        for &o in &objectives {
            let best = r.policy(o);
            table.rows.push(vec![
                Cell::Num(r.value),
                Cell::Text(o.name().into()),
                Cell::Num(best.f_star),
                Cell::Num(best.phi_star),
                Cell::Num(best.value),
                Cell::Num(best.ties as f64),
            ]);
        }
    }
    table.metadata = run_metadata(&json!({ "meta": meta, "frontier": axis }).to_string());
    let text = table.to_csv(!no_meta);
    match a.out.clone().or(file.out.clone()) {
        Some(path) => {
            write_file(&path, &text)?;
            emit(out, &format!("wrote {} rows to {}\n", table.rows.len(), path.display()))
        }
        None => emit(out, &text),
    }
}

/// Sup-norm tolerance for an agent grid of `n` points: two cells.
pub fn oracle_tolerance(agents: usize) -> f64 {
    2.0 / (agents.max(2) - 1) as f64
}

pub fn cmd_oracle_check(a: &OracleArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let resolved = config::resolve(&a.model)?;
    let file = &resolved.file;
    let agents = a.agents.or(file.agents).unwrap_or(DEFAULT_AGENTS);
    if agents < 3 {
        return Err(config_err("agents must be at least 3"));
    }
    let draws = a.draws.or(file.draws).unwrap_or(0);
    let seed = a.seed.or(file.seed).unwrap_or(0);
    let tol = oracle_tolerance(agents);
    let opts = CheckOptions { agents, corrupt_hi: a.corrupt_hi };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = vec![resolved.params];
    points.extend((0..draws).map(|_| random_params(&mut rng, None)));

    let mut failures = 0;
    let mut worst: Option<(f64, String)> = None;
    for (i, p) in points.iter().enumerate() {
        let r = solve_or_fail(p)?;
        for c in threshold_checks(p, r.firm.x2, r.firm.p2, opts) {
            let ok = c.distance <= tol && c.skill_ordered && c.switch_points <= 2;
            if !ok {
                failures += 1;
            }
            emit(
                out,
                &format!(
                    "{} point={i} case={} closed=({:.6},{:.6}) oracle=({:.6},{:.6}) distance={:.3e} switches={}\n",
                    if ok { "ok  " } else { "FAIL" },
                    c.label,
                    c.closed.0,
                    c.closed.1,
                    c.empirical.0,
                    c.empirical.1,
                    c.distance,
                    c.switch_points
                ),
            )?;
            let badness = if ok { c.distance } else { c.distance.max(tol) + 1.0 };
            if worst.as_ref().is_none_or(|(b, _)| badness > *b) {
                worst = Some((badness, format!("{} [{}] distance {:.3e}", describe(p), c.label, c.distance)));
            }
        }
    }
    let worst = worst.map(|w| w.1).unwrap_or_default();
    if failures > 0 {
        return Err(Failure {
            code: EXIT_ORACLE,
            message: format!("{failures} threshold checks beyond tolerance {tol:.3e}; worst: {worst}"),
        });
    }
    emit(out, &format!("pass: {} points, tolerance {tol:.3e}, worst {worst}\n", points.len()))
}
