//! Rectangular result tables and their CSV form.
//!
//! Numbers are written with 17 significant digits so that parsing the file
//! gives back the same bits. Optional `# key: value` lines before the header
//! carry run metadata.

use std::fmt;

use sha2::{Digest, Sha256};

use copyright_eq::policy::SweepTable;

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl PartialEq for Cell {
    fn eq(&self, other: &Cell) -> bool {
        match (self, other) {
            (Cell::Num(a), Cell::Num(b)) => a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()),
            (Cell::Text(a), Cell::Text(b)) => a == b,
            _ => false,
        }
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_g17(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn read(s: &str) -> Cell {
        match s.parse::<f64>() {
            Ok(v) if !s.is_empty() => Cell::Num(v),
            _ => Cell::Text(s.to_string()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Text(_) => None,
        }
    }
}

/// `%.17g`: shortest of fixed or scientific notation at 17 significant
/// digits, trailing zeros removed.
pub fn fmt_g17(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableError(pub String);

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for TableError {}

impl ResultTable {
    pub fn new(header: Vec<String>) -> ResultTable {
        ResultTable { header, rows: Vec::new(), metadata: Vec::new() }
    }

    pub fn from_sweep(t: &SweepTable) -> ResultTable {
        let mut header: Vec<String> = t.params.iter().map(|p| p.name().to_string()).collect();
        header.extend(t.metrics.iter().map(|m| m.name().to_string()));
        header.push("error".into());
        let rows = t
            .rows
            .iter()
            .map(|r| {
                let mut row: Vec<Cell> = r.inputs.iter().chain(&r.values).map(|&v| Cell::Num(v)).collect();
                row.push(Cell::Text(r.error.clone().unwrap_or_default()));
                row
            })
            .collect();
        ResultTable { header, rows, metadata: Vec::new() }
    }

    pub fn is_rectangular(&self) -> bool {
        self.rows.iter().all(|r| r.len() == self.header.len())
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }

    pub fn to_csv(&self, with_metadata: bool) -> String {
        let mut out = String::new();
        if with_metadata {
            for (k, v) in &self.metadata {
                out.push_str(&format!("# {k}: {v}\n"));
            }
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&body).expect("utf-8 cells"));
        out
    }

    pub fn parse_csv(text: &str) -> Result<ResultTable, TableError> {
        let mut metadata = Vec::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else { break };
            let rest = rest.trim_end_matches('\n').trim();
            let (k, v) = rest.split_once(": ").unwrap_or((rest, ""));
            metadata.push((k.to_string(), v.to_string()));
            body_start += line.len();
        }
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(&text.as_bytes()[body_start..]);
        let header: Vec<String> =
            r.headers().map_err(|e| TableError(e.to_string()))?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| TableError(e.to_string()))?;
            rows.push(rec.iter().map(Cell::read).collect());
        }
        Ok(ResultTable { header, rows, metadata })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Tool version, config hash and wall-clock time of the run.
pub fn run_metadata(config_json: &str) -> Vec<(String, String)> {
    vec![
        ("tool".into(), format!("copyright-eq {}", env!("CARGO_PKG_VERSION"))),
        ("config_sha256".into(), sha256_hex(config_json.as_bytes())),
        ("generated".into(), chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17() {
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt_g17(1.5e-7), "1.4999999999999999e-7");
        assert_eq!(fmt_g17(-2.5), "-2.5");
        assert_eq!(fmt_g17(1e20), "1e20");
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456.789, f64::MAX, f64::MIN_POSITIVE] {
            assert_eq!(fmt_g17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn metadata_lines() {
        let mut t = ResultTable::new(vec!["a".into()]);
        t.rows.push(vec![Cell::Num(1.0)]);
        t.metadata = run_metadata("{}");
        let text = t.to_csv(true);
        assert!(text.starts_with("# tool: copyright-eq"));
        assert!(!text.contains('\r'));
        assert_eq!(ResultTable::parse_csv(&text).unwrap(), t);
        assert_eq!(t.to_csv(false), "a\n1\n");
    }
}
