//! Run configuration. Values are layered preset, then config file, then
//! command-line flags, each layer overriding the previous one.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use copyright_eq::policy::{step_grid, Axis, Metric, Objective, Param};
use copyright_eq::{DataStock, ModelParams, Regime};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Preset {
    PaperAbundant,
    PaperScarce,
}

impl Preset {
    pub fn parse(s: &str) -> Option<Preset> {
        Preset::from_str(s.trim(), true).ok()
    }

    pub fn params(self) -> ModelParams {
        match self {
            Preset::PaperAbundant => ModelParams::paper(Regime::Abundant),
            Preset::PaperScarce => ModelParams::paper(Regime::Scarce),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum NumOrText {
    Num(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum TextList {
    One(String),
    Many(Vec<String>),
}

impl TextList {
    fn items(&self) -> Vec<String> {
        match self {
            TextList::One(s) => s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect(),
            TextList::Many(v) => v.clone(),
        }
    }
}

/// Flat `key = value` config file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub regime: Option<String>,
    pub f: Option<f64>,
    pub phi: Option<f64>,
    pub phi_min: Option<f64>,
    pub beta: Option<f64>,
    #[serde(rename = "c_H", alias = "c_h")]
    pub c_h: Option<f64>,
    #[serde(rename = "c_A", alias = "c_a")]
    pub c_a: Option<f64>,
    pub lambda: Option<f64>,
    #[serde(rename = "M", alias = "m")]
    pub m: Option<f64>,
    pub k: Option<f64>,
    #[serde(rename = "X1", alias = "x1")]
    pub x1: Option<f64>,
    #[serde(rename = "Q0", alias = "q0")]
    pub q0: Option<NumOrText>,
    pub vary: Option<TextList>,
    pub metrics: Option<TextList>,
    pub objective: Option<String>,
    pub f_grid: Option<String>,
    pub phi_grid: Option<String>,
    pub f_max: Option<f64>,
    pub frontier: Option<String>,
    pub figure: Option<String>,
    pub out: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub agents: Option<usize>,
    pub draws: Option<usize>,
    pub seed: Option<u64>,
    pub no_metadata: Option<bool>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<FileConfig, ConfigError> {
        toml::from_str(text).map_err(|e| bad(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<FileConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        FileConfig::parse(&text).map_err(|e| bad(format!("{}: {}", path.display(), e.0)))
    }

    pub fn vary(&self) -> Vec<String> {
        self.vary.as_ref().map(TextList::items).unwrap_or_default()
    }

    pub fn metrics(&self) -> Vec<String> {
        self.metrics.as_ref().map(TextList::items).unwrap_or_default()
    }
}

/// Model flags shared by every command.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Flat key = value config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// abundant (Q0 = inf) or scarce (Q0 = 0).
    #[arg(long)]
    pub regime: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub f: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    #[arg(long = "phi-min", allow_negative_numbers = true)]
    pub phi_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long = "c-h", allow_negative_numbers = true)]
    pub c_h: Option<f64>,
    #[arg(long = "c-a", allow_negative_numbers = true)]
    pub c_a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long = "m", allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long = "x1", allow_negative_numbers = true)]
    pub x1: Option<f64>,
    /// Number or `inf`.
    #[arg(long = "q0", allow_negative_numbers = true)]
    pub q0: Option<String>,
}

fn parse_regime(s: &str) -> Result<Regime, ConfigError> {
    Regime::parse(s).ok_or_else(|| bad(format!("unknown regime `{s}` (abundant | scarce)")))
}

fn parse_stock(v: &NumOrText) -> Result<DataStock, ConfigError> {
    match v {
        NumOrText::Num(x) => Ok(if x.is_infinite() { DataStock::Infinite } else { DataStock::Finite(*x) }),
        NumOrText::Text(s) => DataStock::parse(s).ok_or_else(|| bad(format!("Q0: cannot parse `{s}`"))),
    }
}

struct Layer {
    regime: Option<Regime>,
    q0: Option<DataStock>,
    values: [(Param, Option<f64>); 10],
}

impl Layer {
    fn apply(&self, p: &mut ModelParams) {
        if let Some(r) = self.regime {
            *p = p.with_regime(r);
        }
        if let Some(q) = self.q0 {
            p.q0 = q;
        }
        for (param, v) in self.values {
            if let Some(v) = v {
                param.set(p, v);
            }
        }
    }
}

fn file_layer(c: &FileConfig) -> Result<Layer, ConfigError> {
    Ok(Layer {
        regime: c.regime.as_deref().map(parse_regime).transpose()?,
        q0: c.q0.as_ref().map(parse_stock).transpose()?,
        values: [
            (Param::F, c.f),
            (Param::Phi, c.phi),
            (Param::PhiMin, c.phi_min),
            (Param::Beta, c.beta),
            (Param::CH, c.c_h),
            (Param::CA, c.c_a),
            (Param::Lambda, c.lambda),
            (Param::M, c.m),
            (Param::K, c.k),
            (Param::X1, c.x1),
        ],
    })
}

fn flag_layer(a: &ModelArgs) -> Result<Layer, ConfigError> {
    Ok(Layer {
        regime: a.regime.as_deref().map(parse_regime).transpose()?,
        q0: a.q0.as_deref().map(|s| parse_stock(&NumOrText::Text(s.into()))).transpose()?,
        values: [
            (Param::F, a.f),
            (Param::Phi, a.phi),
            (Param::PhiMin, a.phi_min),
            (Param::Beta, a.beta),
            (Param::CH, a.c_h),
            (Param::CA, a.c_a),
            (Param::Lambda, a.lambda),
            (Param::M, a.m),
            (Param::K, a.k),
            (Param::X1, a.x1),
        ],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub params: ModelParams,
    pub preset: Preset,
    pub file: FileConfig,
}

/// Builds the validated parameter point. Without any preset the abundant
/// paper preset is the starting layer.
pub fn resolve(args: &ModelArgs) -> Result<Resolved, ConfigError> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    resolve_with(args, file)
}

pub fn resolve_with(args: &ModelArgs, file: FileConfig) -> Result<Resolved, ConfigError> {
    let file_preset = match file.preset.as_deref() {
        Some(s) => Some(Preset::parse(s).ok_or_else(|| bad(format!("unknown preset `{s}`")))?),
        None => None,
    };
    let preset = args.preset.or(file_preset).unwrap_or(Preset::PaperAbundant);
    let mut params = preset.params();
    file_layer(&file)?.apply(&mut params);
    flag_layer(args)?.apply(&mut params);
    params.validate().map_err(|e| bad(format!("invalid parameters: {e}")))?;
    Ok(Resolved { params, preset, file })
}

/// Grid text: `lo:hi:step`, a comma list, or a single value.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, ConfigError> {
    let s = s.trim();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(format!("grid `{s}`: `{t}` is not a number")));
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!("grid `{s}`: expected lo:hi:step")));
        }
        let (lo, hi, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || hi < lo {
            return Err(bad(format!("grid `{s}`: need step > 0 and hi >= lo")));
        }
        return Ok(step_grid(lo, hi, step));
    }
    s.split(',').map(num).collect()
}

/// `name=grid`
pub fn parse_axis(s: &str) -> Result<Axis, ConfigError> {
    let (name, grid) = s.split_once('=').ok_or_else(|| bad(format!("axis `{s}`: expected name=grid")))?;
    let param = Param::parse(name).ok_or_else(|| bad(format!("axis `{s}`: unknown parameter `{}`", name.trim())))?;
    Ok(Axis::new(param, parse_grid(grid)?))
}

pub fn parse_metrics(items: &[String]) -> Result<Vec<Metric>, ConfigError> {
    items
        .iter()
        .map(|m| Metric::parse(m).ok_or_else(|| bad(format!("unknown metric `{m}`"))))
        .collect()
}

pub fn parse_objectives(s: &str) -> Result<Vec<Objective>, ConfigError> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Objective::ALL.to_vec());
    }
    s.split(',')
        .map(|o| Objective::parse(o).ok_or_else(|| bad(format!("unknown objective `{}`", o.trim()))))
        .collect()
}
