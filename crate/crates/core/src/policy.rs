//! Policy lab: grid sweeps, optimal `(f, phi)` per objective, frontiers over
//! structural parameters and the bundled figure recipes.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::equilibrium::{solve, EquilibriumReport};
use crate::params::{DataStock, ModelParams, Regime};

/// Objective values within this distance of the best are counted as ties.
pub const TIE_TOL: f64 = 1e-9;
pub const GRID_STEP: f64 = 0.005;
pub const DEFAULT_F_MAX: f64 = 0.6;
/// Default line values when a figure varies `X1` across curves.
pub const DEFAULT_X1_LINES: [f64; 3] = [0.3, 0.5, 0.7];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("grid for {0} is empty")]
    EmptyGrid(&'static str),
    #[error("grid for {0} is not strictly increasing")]
    NotIncreasing(&'static str),
    #[error("{param}={value} outside its domain ({rule})")]
    OutOfDomain { param: &'static str, value: f64, rule: &'static str },
    #[error("{0} varied twice")]
    DuplicateAxis(&'static str),
    #[error("no metrics requested")]
    NoMetrics,
    #[error("{0} cannot be a structural frontier axis")]
    NotStructural(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Metric {
    X2,
    U1,
    U2,
    U,
    S1,
    S2,
    S,
    W1,
    W2,
    W,
    Q1H,
    Q1A,
    Q2H,
    Q2A,
    P2,
    Rho,
}

impl Metric {
    pub const ALL: [Metric; 16] = [
        Metric::X2,
        Metric::U1,
        Metric::U2,
        Metric::U,
        Metric::S1,
        Metric::S2,
        Metric::S,
        Metric::W1,
        Metric::W2,
        Metric::W,
        Metric::Q1H,
        Metric::Q1A,
        Metric::Q2H,
        Metric::Q2A,
        Metric::P2,
        Metric::Rho,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::X2 => "X2",
            Metric::U1 => "u1",
            Metric::U2 => "u2",
            Metric::U => "u",
            Metric::S1 => "s1",
            Metric::S2 => "s2",
            Metric::S => "s",
            Metric::W1 => "w1",
            Metric::W2 => "w2",
            Metric::W => "w",
            Metric::Q1H => "Q1H",
            Metric::Q1A => "Q1A",
            Metric::Q2H => "Q2H",
            Metric::Q2A => "Q2A",
            Metric::P2 => "p2",
            Metric::Rho => "rho",
        }
    }

    /// Exact names first, then case-insensitively.
    pub fn parse(s: &str) -> Option<Metric> {
        let s = s.trim();
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .or_else(|| Metric::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(s)))
    }

    pub fn value(self, r: &EquilibriumReport) -> f64 {
        match self {
            Metric::X2 => r.firm.x2,
            Metric::U1 => r.outcome1.u,
            Metric::U2 => r.outcome2.u,
            Metric::U => r.longterm.u,
            Metric::S1 => r.outcome1.s,
            Metric::S2 => r.outcome2.s,
            Metric::S => r.longterm.s,
            Metric::W1 => r.outcome1.w,
            Metric::W2 => r.outcome2.w,
            Metric::W => r.longterm.w,
            Metric::Q1H => r.outcome1.q_h,
            Metric::Q1A => r.outcome1.q_a,
            Metric::Q2H => r.outcome2.q_h,
            Metric::Q2A => r.outcome2.q_a,
            Metric::P2 => r.firm.p2,
            Metric::Rho => r.rho(),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Param {
    F,
    Phi,
    PhiMin,
    Beta,
    CH,
    CA,
    Lambda,
    M,
    K,
    X1,
    Q0,
}

impl Param {
    pub const ALL: [Param; 11] = [
        Param::F,
        Param::Phi,
        Param::PhiMin,
        Param::Beta,
        Param::CH,
        Param::CA,
        Param::Lambda,
        Param::M,
        Param::K,
        Param::X1,
        Param::Q0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::F => "f",
            Param::Phi => "phi",
            Param::PhiMin => "phi_min",
            Param::Beta => "beta",
            Param::CH => "c_H",
            Param::CA => "c_A",
            Param::Lambda => "lambda",
            Param::M => "M",
            Param::K => "k",
            Param::X1 => "X1",
            Param::Q0 => "Q0",
        }
    }

    pub fn parse(s: &str) -> Option<Param> {
        let s = s.trim();
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .or_else(|| Param::ALL.into_iter().find(|p| p.name().eq_ignore_ascii_case(s)))
    }

    pub fn get(self, p: &ModelParams) -> f64 {
        match self {
            Param::F => p.f,
            Param::Phi => p.phi,
            Param::PhiMin => p.phi_min,
            Param::Beta => p.beta,
            Param::CH => p.c_h,
            Param::CA => p.c_a,
            Param::Lambda => p.lambda,
            Param::M => p.m,
            Param::K => p.k,
            Param::X1 => p.x1,
            Param::Q0 => p.q0.as_f64(),
        }
    }

    pub fn set(self, p: &mut ModelParams, v: f64) {
        match self {
            Param::F => p.f = v,
            Param::Phi => p.phi = v,
            Param::PhiMin => p.phi_min = v,
            Param::Beta => p.beta = v,
            Param::CH => p.c_h = v,
            Param::CA => p.c_a = v,
            Param::Lambda => p.lambda = v,
            Param::M => p.m = v,
            Param::K => p.k = v,
            Param::X1 => p.x1 = v,
            Param::Q0 => p.q0 = if v.is_infinite() { DataStock::Infinite } else { DataStock::Finite(v) },
        }
    }

    /// Bounds that hold regardless of the other parameters.
    fn check(self, v: f64) -> Result<(), &'static str> {
        let ok = match self {
            Param::F => v >= 0.0 && v.is_finite(),
            Param::Phi | Param::PhiMin => (0.0..=1.0).contains(&v),
            Param::Beta | Param::CH | Param::CA => v > 0.0 && v < 1.0,
            Param::Lambda | Param::X1 => (0.0..=1.0).contains(&v),
            Param::M => v >= 1.0 && v.is_finite(),
            Param::K => v > 0.0 && v.is_finite(),
            Param::Q0 => v >= 0.0,
        };
        if ok {
            return Ok(());
        }
        Err(match self {
            Param::F => "f >= 0",
            Param::Phi | Param::PhiMin => "0 <= phi <= 1",
            Param::Beta | Param::CH | Param::CA => "0 < value < 1",
            Param::Lambda => "0 <= lambda <= 1",
            Param::X1 => "0 <= X1 <= 1",
            Param::M => "M >= 1",
            Param::K => "k > 0",
            Param::Q0 => "Q0 >= 0",
        })
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `lo, lo + step, ..., hi`, snapped to 12 decimals so grid values print
/// cleanly. The last point is `hi` exactly.
pub fn step_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || hi < lo {
        return vec![lo];
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut g: Vec<f64> = (0..=n).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect();
    if hi - g[n] > 1e-12 {
        g.push(hi);
    } else {
        g[n] = hi;
    }
    g
}

pub fn default_f_grid(f_max: f64) -> Vec<f64> {
    step_grid(0.0, f_max, GRID_STEP)
}

pub fn default_phi_grid(phi_min: f64) -> Vec<f64> {
    step_grid(phi_min, 1.0, GRID_STEP)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub param: Param,
    pub grid: Vec<f64>,
}

impl Axis {
    pub fn new(param: Param, grid: Vec<f64>) -> Axis {
        Axis { param, grid }
    }

    fn validate(&self) -> Result<(), PolicyError> {
        let name = self.param.name();
        if self.grid.is_empty() {
            return Err(PolicyError::EmptyGrid(name));
        }
        if self.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(PolicyError::NotIncreasing(name));
        }
        for &v in &self.grid {
            self.param.check(v).map_err(|rule| PolicyError::OutOfDomain { param: name, value: v, rule })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub varying: Vec<Axis>,
    pub base: ModelParams,
    /// Overrides the base data stock when set.
    pub regime: Option<Regime>,
    pub metrics: Vec<Metric>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), PolicyError> {
        if self.metrics.is_empty() {
            return Err(PolicyError::NoMetrics);
        }
        for (i, a) in self.varying.iter().enumerate() {
            a.validate()?;
            if self.varying[..i].iter().any(|b| b.param == a.param) {
                return Err(PolicyError::DuplicateAxis(a.param.name()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.varying.iter().map(|a| a.grid.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid values of row `i`, last axis fastest.
    pub fn point(&self, mut i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.varying.len()];
        for (slot, a) in out.iter_mut().zip(&self.varying).rev() {
            let n = a.grid.len();
            *slot = a.grid[i % n];
            i /= n;
        }
        out
    }

    pub fn params_at(&self, values: &[f64]) -> ModelParams {
        let mut p = match self.regime {
            Some(r) => self.base.with_regime(r),
            None => self.base,
        };
        for (a, &v) in self.varying.iter().zip(values) {
            a.param.set(&mut p, v);
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub inputs: Vec<f64>,
    /// NaN where the point failed.
    pub values: Vec<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub params: Vec<Param>,
    pub metrics: Vec<Metric>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn column(&self, m: Metric) -> Option<Vec<f64>> {
        let j = self.metrics.iter().position(|&x| x == m)?;
        Some(self.rows.iter().map(|r| r.values[j]).collect())
    }

    pub fn errors(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

/// Order-preserving map, parallel when the `parallel` feature is on.
pub fn par_map<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub fn sweep(spec: &SweepSpec) -> Result<SweepTable, PolicyError> {
    spec.validate()?;
    let rows = par_map(spec.len(), |i| {
        let inputs = spec.point(i);
        match solve(&spec.params_at(&inputs)) {
            Ok(r) => SweepRow { values: spec.metrics.iter().map(|m| m.value(&r)).collect(), inputs, error: None },
            Err(e) => SweepRow { values: vec![f64::NAN; spec.metrics.len()], inputs, error: Some(e.to_string()) },
        }
    });
    Ok(SweepTable { params: spec.varying.iter().map(|a| a.param).collect(), metrics: spec.metrics.clone(), rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Objective {
    Welfare,
    ConsumerSurplus,
    AiDevelopment,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::Welfare, Objective::ConsumerSurplus, Objective::AiDevelopment];

    pub fn name(self) -> &'static str {
        match self {
            Objective::Welfare => "WELFARE",
            Objective::ConsumerSurplus => "CONSUMER_SURPLUS",
            Objective::AiDevelopment => "AI_DEVELOPMENT",
        }
    }

    pub fn parse(s: &str) -> Option<Objective> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "welfare" | "w" => Some(Objective::Welfare),
            "consumer_surplus" | "s" => Some(Objective::ConsumerSurplus),
            "ai_development" | "x2" => Some(Objective::AiDevelopment),
            _ => None,
        }
    }

    pub fn metric(self) -> Metric {
        match self {
            Objective::Welfare => Metric::W,
            Objective::ConsumerSurplus => Metric::S,
            Objective::AiDevelopment => Metric::X2,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalPolicy {
    pub objective: Objective,
    pub f_star: f64,
    pub phi_star: f64,
    pub value: f64,
    pub ties: usize,
}

/// All three objectives on an `f x phi` grid, row-major in `f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicySurface {
    pub f_grid: Vec<f64>,
    pub phi_grid: Vec<f64>,
    /// `[w, s, X2]` per point; NaN where the solve failed.
    pub values: Vec<[f64; 3]>,
    pub failures: usize,
}

impl PolicySurface {
    pub fn compute(base: &ModelParams, regime: Regime, f_grid: &[f64], phi_grid: &[f64]) -> Result<PolicySurface, PolicyError> {
        let base = base.with_regime(regime);
        Axis::new(Param::F, f_grid.to_vec()).validate()?;
        Axis::new(Param::Phi, phi_grid.to_vec()).validate()?;
        if let Some(&v) = phi_grid.iter().find(|&&v| v < base.phi_min) {
            return Err(PolicyError::OutOfDomain { param: "phi", value: v, rule: "phi >= phi_min" });
        }
        let nphi = phi_grid.len();
        let values = par_map(f_grid.len() * nphi, |i| {
            let p = ModelParams { f: f_grid[i / nphi], phi: phi_grid[i % nphi], ..base };
            match solve(&p) {
                Ok(r) => [r.objectives.w, r.objectives.s, r.objectives.x2],
                Err(_) => [f64::NAN; 3],
            }
        });
        let failures = values.iter().filter(|v| v[0].is_nan()).count();
        Ok(PolicySurface { f_grid: f_grid.to_vec(), phi_grid: phi_grid.to_vec(), values, failures })
    }

    pub fn get(&self, objective: Objective, fi: usize, pj: usize) -> f64 {
        self.values[fi * self.phi_grid.len() + pj][objective.index()]
    }

    /// Grid argmax; among points within [`TIE_TOL`] of the best the largest
    /// `(f, phi)` wins.
    pub fn optimum(&self, objective: Objective) -> OptimalPolicy {
        let k = objective.index();
        let best = self.values.iter().map(|v| v[k]).filter(|v| !v.is_nan()).fold(f64::NEG_INFINITY, f64::max);
        let nphi = self.phi_grid.len();
        let mut ties = 0;
        let mut pick = None;
        for (i, v) in self.values.iter().enumerate() {
            if v[k] >= best - TIE_TOL {
                ties += 1;
                pick = Some(i);
            }
        }
        let i = pick.unwrap_or(self.values.len() - 1);
        OptimalPolicy {
            objective,
            f_star: self.f_grid[i / nphi],
            phi_star: self.phi_grid[i % nphi],
            value: self.values[i][k],
            ties,
        }
    }
}

pub fn optimize_policy(
    objective: Objective,
    regime: Regime,
    base: &ModelParams,
    f_grid: &[f64],
    phi_grid: &[f64],
) -> Result<OptimalPolicy, PolicyError> {
    Ok(PolicySurface::compute(base, regime, f_grid, phi_grid)?.optimum(objective))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierRow {
    pub value: f64,
    /// Indexed like [`Objective::ALL`].
    pub policies: [OptimalPolicy; 3],
    pub failures: usize,
}

impl FrontierRow {
    pub fn policy(&self, objective: Objective) -> &OptimalPolicy {
        &self.policies[objective.index()]
    }
}

/// Optimal policies for every objective at each value of `X1`, `M` or `k`.
pub fn frontier(
    base: &ModelParams,
    regime: Regime,
    param: Param,
    values: &[f64],
    f_grid: &[f64],
    phi_grid: &[f64],
) -> Result<Vec<FrontierRow>, PolicyError> {
    if !matches!(param, Param::X1 | Param::M | Param::K) {
        return Err(PolicyError::NotStructural(param.name()));
    }
    Axis::new(param, values.to_vec()).validate()?;
    values
        .iter()
        .map(|&v| {
            let mut p = *base;
            param.set(&mut p, v);
            let surface = PolicySurface::compute(&p, regime, f_grid, phi_grid)?;
            Ok(FrontierRow {
                value: v,
                policies: Objective::ALL.map(|o| surface.optimum(o)),
                failures: surface.failures,
            })
        })
        .collect()
}

/// Whether raising `phi` narrows the welfare gap between generous fair use
/// and a fee `f`, in the data-abundant regime.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubstitutabilityCheck {
    pub f: f64,
    pub phi_grid: Vec<f64>,
    /// `w(0, phi) - w(f, phi)`
    pub gaps: Vec<f64>,
    /// Largest step-to-step increase of the gap.
    pub worst_increase: f64,
    pub pass: bool,
}

pub const SUBSTITUTABILITY_TOL: f64 = 1e-6;

pub fn substitutability(base: &ModelParams, fees: &[f64], phi_grid: &[f64]) -> Result<Vec<SubstitutabilityCheck>, PolicyError> {
    let mut f_grid = vec![0.0];
    f_grid.extend(fees.iter().copied().filter(|&f| f > 0.0));
    let surface = PolicySurface::compute(base, Regime::Abundant, &f_grid, phi_grid)?;
    let n = phi_grid.len();
    Ok(fees
        .iter()
        .map(|&f| {
            let fi = f_grid.iter().position(|&g| g == f).unwrap_or(0);
            let gaps: Vec<f64> = (0..n)
                .map(|j| surface.get(Objective::Welfare, 0, j) - surface.get(Objective::Welfare, fi, j))
                .collect();
            let worst_increase = gaps.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max).max(0.0);
            SubstitutabilityCheck {
                f,
                phi_grid: phi_grid.to_vec(),
                pass: worst_increase <= SUBSTITUTABILITY_TOL && gaps.iter().all(|g| !g.is_nan()),
                gaps,
                worst_increase,
            }
        })
        .collect())
}

/// What a figure panel plots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PanelKind {
    /// A metric against one lever, one curve per value of `line`.
    Curves { x: Axis, line: Axis, metric: Metric },
    /// Optimal lever against a structural parameter, one curve per objective.
    Optimum { x: Axis, lever: Param, f_grid: Vec<f64>, phi_grid: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Panel {
    pub id: String,
    pub title: String,
    pub regime: Regime,
    pub base: ModelParams,
    pub kind: PanelKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub label: String,
    pub xs: Vec<f64>,
    /// NaN where the point failed.
    pub ys: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelData {
    pub id: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

pub const FIGURE_IDS: [&str; 9] =
    ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "scarce-fair-use"];

fn base(regime: Regime, f: f64) -> ModelParams {
    ModelParams { f, ..ModelParams::paper(regime) }
}

fn curves(id: &str, title: &str, regime: Regime, base: ModelParams, x: Axis, line: Axis, metric: Metric) -> Panel {
    Panel { id: id.into(), title: title.into(), regime, base, kind: PanelKind::Curves { x, line, metric } }
}

fn panel_letter(i: usize) -> char {
    (b'a' + i as u8) as char
}

/// Recipes for a figure id (`fig7`) or a single panel (`fig7a`).
pub fn figure(id: &str, f_max: f64) -> Option<Vec<Panel>> {
    let id = id.trim().to_ascii_lowercase();
    if let Some(p) = figure_panels(&id, f_max) {
        return Some(p);
    }
    FIGURE_IDS.iter().filter(|f| id.starts_with(*f)).find_map(|f| {
        let v: Vec<Panel> = figure_panels(f, f_max)?.into_iter().filter(|p| p.id == id).collect();
        (!v.is_empty()).then_some(v)
    })
}

fn figure_panels(fig: &str, f_max: f64) -> Option<Vec<Panel>> {
    use Regime::{Abundant, Scarce};
    let phi_min = crate::params::DEFAULT_PHI_MIN;
    let f_axis = || Axis::new(Param::F, default_f_grid(f_max));
    let phi_axis = || Axis::new(Param::Phi, default_phi_grid(phi_min));
    let x1_lines = || Axis::new(Param::X1, DEFAULT_X1_LINES.to_vec());
    let fee_lines = || Axis::new(Param::F, vec![0.0, 0.1, 0.2]);
    let metric_panels = |fig: &str, title: &str, regime, base: ModelParams, x: &dyn Fn() -> Axis, line: &dyn Fn() -> Axis, ms: &[Metric]| {
        ms.iter()
            .enumerate()
            .map(|(i, &m)| curves(&format!("{fig}{}", panel_letter(i)), &format!("{title}: {m}"), regime, base, x(), line(), m))
            .collect::<Vec<_>>()
    };
    let panels = match fig {
        "fig2" => {
            let t = "Fair use, abundant data: consumer surplus";
            let b = base(Abundant, 0.2);
            vec![
                curves("fig2a", &format!("{t} by X1"), Abundant, b, f_axis(), x1_lines(), Metric::S),
                curves("fig2b", &format!("{t} by k"), Abundant, b, f_axis(), Axis::new(Param::K, vec![3.0, 5.0, 7.0]), Metric::S),
                curves("fig2c", &format!("{t} by M"), Abundant, b, f_axis(), Axis::new(Param::M, vec![1.5, 2.0, 3.0]), Metric::S),
            ]
        }
        "fig3" => metric_panels(
            fig,
            "AI-copyrightability, abundant data, Period 1",
            Abundant,
            base(Abundant, 0.2),
            &phi_axis,
            &x1_lines,
            &[Metric::S1, Metric::W1],
        ),
        "fig4" => metric_panels(
            fig,
            "AI-copyrightability, abundant data, Period 2",
            Abundant,
            base(Abundant, 0.2),
            &phi_axis,
            &x1_lines,
            &[Metric::X2, Metric::S2, Metric::W2],
        ),
        "fig5" => metric_panels(
            fig,
            "Fair use and AI-copyrightability, abundant data",
            Abundant,
            base(Abundant, 0.2),
            &phi_axis,
            &fee_lines,
            &[Metric::X2, Metric::S, Metric::W],
        ),
        "fig6" => {
            let b = base(Abundant, 0.0);
            let opt = |id: &str, x: Axis| Panel {
                id: id.into(),
                title: format!("Optimal phi, abundant data, on {}", x.param),
                regime: Abundant,
                base: b,
                kind: PanelKind::Optimum { x, lever: Param::Phi, f_grid: vec![0.0], phi_grid: default_phi_grid(phi_min) },
            };
            vec![
                opt("fig6a", Axis::new(Param::X1, step_grid(0.1, 0.9, 0.1))),
                opt("fig6b", Axis::new(Param::M, step_grid(1.0, 4.0, 0.5))),
            ]
        }
        "fig7" => metric_panels(
            fig,
            "AI-copyrightability, scarce data",
            Scarce,
            base(Scarce, 0.2),
            &phi_axis,
            &x1_lines,
            &[Metric::X2, Metric::S2, Metric::W2],
        ),
        "fig8" => metric_panels(
            fig,
            "Fair use and AI-copyrightability, scarce data",
            Scarce,
            base(Scarce, 0.2),
            &phi_axis,
            &fee_lines,
            &[Metric::X2, Metric::S, Metric::W],
        ),
        "fig9" => {
            let b = base(Scarce, 0.2);
            let axes = [
                Axis::new(Param::X1, step_grid(0.2, 0.6, 0.1)),
                Axis::new(Param::M, step_grid(1.5, 3.0, 0.5)),
                Axis::new(Param::K, step_grid(3.0, 7.0, 1.0)),
            ];
            let mut v = Vec::new();
            for (li, lever) in [Param::F, Param::Phi].into_iter().enumerate() {
                for (ai, x) in axes.iter().enumerate() {
                    v.push(Panel {
                        id: format!("fig9{}", panel_letter(li * 3 + ai)),
                        title: format!("Optimal {lever}, scarce data, on {}", x.param),
                        regime: Scarce,
                        base: b,
                        kind: PanelKind::Optimum {
                            x: x.clone(),
                            lever,
                            f_grid: default_f_grid(f_max),
                            phi_grid: default_phi_grid(phi_min),
                        },
                    });
                }
            }
            v
        }
        "scarce-fair-use" => metric_panels(
            "scarce-fair-use-",
            "Fair use, scarce data",
            Scarce,
            base(Scarce, 0.2),
            &f_axis,
            &x1_lines,
            &[Metric::X2, Metric::W2, Metric::W1, Metric::W, Metric::S],
        ),
        _ => return None,
    };
    Some(panels)
}

fn fmt_value(v: f64) -> String {
    let s = format!("{v}");
    if s.len() > 8 {
        format!("{v:.4}")
    } else {
        s
    }
}

impl Panel {
    pub fn run(&self) -> Result<PanelData, PolicyError> {
        match &self.kind {
            PanelKind::Curves { x, line, metric } => {
                let spec = SweepSpec {
                    varying: vec![line.clone(), x.clone()],
                    base: self.base,
                    regime: Some(self.regime),
                    metrics: vec![*metric],
                };
                let table = sweep(&spec)?;
                let n = x.grid.len();
                let series = line
                    .grid
                    .iter()
                    .enumerate()
                    .map(|(i, &lv)| Series {
                        label: format!("{}={}", line.param, fmt_value(lv)),
                        xs: x.grid.clone(),
                        ys: table.rows[i * n..(i + 1) * n].iter().map(|r| r.values[0]).collect(),
                    })
                    .collect();
                Ok(PanelData {
                    id: self.id.clone(),
                    title: self.title.clone(),
                    x_label: x.param.name().into(),
                    y_label: metric.name().into(),
                    series,
                })
            }
            PanelKind::Optimum { x, lever, f_grid, phi_grid } => {
                let rows = frontier(&self.base, self.regime, x.param, &x.grid, f_grid, phi_grid)?;
                let series = Objective::ALL
                    .iter()
                    .map(|&o| Series {
                        label: o.name().into(),
                        xs: x.grid.clone(),
                        ys: rows
                            .iter()
                            .map(|r| match lever {
                                Param::F => r.policy(o).f_star,
                                _ => r.policy(o).phi_star,
                            })
                            .collect(),
                    })
                    .collect();
                Ok(PanelData {
                    id: self.id.clone(),
                    title: self.title.clone(),
                    x_label: x.param.name().into(),
                    y_label: format!("{lever}*"),
                    series,
                })
            }
        }
    }
}
