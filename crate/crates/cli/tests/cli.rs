use std::fs;

use copyright_eq::{DataStock, ModelParams, Regime};
use copyright_eq_cli::config::{resolve, ModelArgs, Preset};
use copyright_eq_cli::main_with;
use copyright_eq_cli::table::{fmt_g17, Cell, ResultTable};
use proptest::prelude::*;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["copyright-eq"];
    full.extend_from_slice(args);
    let code = main_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn value(out: &str, key: &str) -> f64 {
    let prefix = format!("{key}=");
    out.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_else(|| panic!("{key} missing")).parse().unwrap()
}

fn cell() -> impl Strategy<Value = Cell> {
    prop_oneof![
        any::<f64>().prop_map(Cell::Num),
        "[a-z ,\"=]{0,12}".prop_filter("not numeric", |s| s.parse::<f64>().is_err()).prop_map(Cell::Text),
    ]
}

proptest! {
    #[test]
    fn csv_round_trip(rows in prop::collection::vec(prop::collection::vec(cell(), 3), 0..8), meta in any::<bool>()) {
        let mut t = ResultTable::new(vec!["a".into(), "b c".into(), "error".into()]);
        t.rows = rows;
        if meta {
            t.metadata = vec![("tool".into(), "x 1".into()), ("config_sha256".into(), "ab".into())];
        }
        let back = ResultTable::parse_csv(&t.to_csv(meta)).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn g17_round_trips(v in any::<f64>()) {
        let s = fmt_g17(v);
        let back: f64 = s.parse().unwrap();
        prop_assert!(back.to_bits() == v.to_bits() || (v.is_nan() && back.is_nan()));
        let mantissa: String = s.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).collect();
        prop_assert!(mantissa.trim_start_matches('0').len() <= 17, "{}", s);
    }
}

#[test]
fn config_precedence_flags_over_file_over_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    fs::write(&path, "preset = \"paper-scarce\"\nf = 0.1\nphi = 0.5\nk = 4\n").unwrap();
    let args = ModelArgs { config: Some(path.clone()), f: Some(0.3), ..Default::default() };
    let r = resolve(&args).unwrap();
    let preset = ModelParams::paper(Regime::Scarce);
    assert_eq!(r.preset, Preset::PaperScarce);
    assert_eq!(r.params.f, 0.3);
    assert_eq!(r.params.phi, 0.5);
    assert_eq!(r.params.k, 4.0);
    assert_eq!(r.params.m, preset.m);
    assert_eq!(r.params.q0, DataStock::Finite(0.0));

    let args = ModelArgs { config: Some(path.clone()), preset: Some(Preset::PaperAbundant), ..Default::default() };
    let r = resolve(&args).unwrap();
    assert_eq!((r.params.q0, r.params.f), (DataStock::Infinite, 0.1));

    let (code, out, _) = run(&["solve", "--config", path.to_str().unwrap(), "--f", "0.3"]);
    assert_eq!(code, 0);
    assert!(out.contains("f=0.3 phi=0.5"), "{out}");
}

#[test]
fn bad_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    fs::write(&path, "f = 0.1\ntypo = 3\n").unwrap();
    let (code, _, err) = run(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("typo"), "{err}");
    assert_eq!(run(&["solve", "--config", "/nonexistent/x.toml"]).0, 1);
    let (code, _, err) = run(&["solve", "--f", "-1"]);
    assert_eq!(code, 1);
    assert!(err.contains("f >= 0"), "{err}");
    assert_eq!(run(&["solve", "--regime", "medium"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
}

#[test]
fn solve_examples() {
    let (code, out, _) = run(&["solve", "--preset", "paper-abundant", "--f", "0", "--phi", "0.6"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "X2"), 1.0);
    assert!((value(&out, "w") - 1.898_213_527_239_150_5).abs() < 1e-12);

    let (code, out, _) = run(&["solve", "--preset", "paper-scarce", "--f", "1000"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "X2"), 0.4);
    assert!(out.contains("scenario=NO_DEMAND"));

    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let (code, _, _) = run(&["solve", "--preset", "paper-scarce", "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["period1"]["scenario"], "PARTIAL");
}

#[test]
fn sweep_rows_are_lexicographic_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &std::path::Path| {
        vec![
            "sweep".to_string(),
            "--preset".into(),
            "paper-scarce".into(),
            "--vary".into(),
            "f=0:0.6:0.005".into(),
            "--vary".into(),
            "phi=0.2,0.6,1".into(),
            "--metrics".into(),
            "X2,w,rho".into(),
            "--no-metadata".into(),
            "--out".into(),
            p.to_str().unwrap().to_string(),
        ]
    };
    let as_refs = |v: &Vec<String>| v.iter().map(String::as_str).collect::<Vec<_>>().join("\u{0}");
    for p in [&a, &b] {
        let v = args(p);
        let joined = as_refs(&v);
        let refs: Vec<&str> = joined.split('\u{0}').collect();
        assert_eq!(run(&refs).0, 0);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let t = ResultTable::parse_csv(&text).unwrap();
    assert_eq!(t.header, vec!["f", "phi", "X2", "w", "rho", "error"]);
    assert_eq!(t.rows.len(), 121 * 3);
    assert!(t.is_rectangular());
    let keys: Vec<(f64, f64)> = t.rows.iter().map(|r| (r[0].as_f64().unwrap(), r[1].as_f64().unwrap())).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    assert_eq!(keys, sorted);
}

#[test]
fn sweep_errors_and_metadata() {
    let (code, out, _) = run(&["sweep", "--preset", "paper-scarce", "--vary", "c_H=0.3,0.7", "--metrics", "X2"]);
    assert_eq!(code, 0);
    let t = ResultTable::parse_csv(&out).unwrap();
    assert_eq!(t.metadata.iter().map(|m| m.0.as_str()).collect::<Vec<_>>(), ["tool", "config_sha256", "generated"]);
    assert_eq!(t.rows[0][2], Cell::Text(String::new()));
    assert!(matches!(&t.rows[1][2], Cell::Text(e) if e.contains("c_H < beta")));
    assert_eq!(run(&["sweep", "--vary", "f="]).0, 1);
    assert_eq!(run(&["sweep", "--vary", "f=0.2,0.1"]).0, 1);
    assert_eq!(run(&["sweep", "--metrics", "X3"]).0, 1);
}

#[test]
fn figure_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&["figure", "fig7a", "--out-dir", dir.path().to_str().unwrap(), "--no-metadata"]);
    assert_eq!(code, 0);
    let t = ResultTable::parse_csv(&fs::read_to_string(dir.path().join("fig7a.csv")).unwrap()).unwrap();
    assert_eq!(t.header, vec!["phi", "X2[X1=0.3]", "X2[X1=0.5]", "X2[X1=0.7]"]);
    let svg = fs::read_to_string(dir.path().join("fig7a.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("polyline"));
    let (code, _, err) = run(&["figure", "nope", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown figure"));
}

#[test]
fn optimize_prints_each_objective() {
    let (code, out, _) =
        run(&["optimize", "--preset", "paper-abundant", "--f-grid", "0:0.2:0.1", "--phi-grid", "0.05:1:0.05"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("objective=")).count(), 3);
    assert!(out.contains("objective=AI_DEVELOPMENT f*=0 phi*=1 value=1 ties=20"), "{out}");
    assert_eq!(run(&["optimize", "--q0", "0.3"]).0, 1);
    assert_eq!(run(&["optimize", "--objective", "profit"]).0, 1);
}

#[test]
fn oracle_check_passes_and_detects_faults() {
    let (code, out, _) = run(&["oracle-check", "--preset", "paper-scarce"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("pass:"));
    let (code, _, _) = run(&["oracle-check", "--preset", "paper-abundant", "--agents", "101", "--draws", "5"]);
    assert_eq!(code, 0);
    let (code, _, err) = run(&["oracle-check", "--preset", "paper-scarce", "--corrupt-hi", "0.01"]);
    assert_eq!(code, 3);
    assert!(err.contains("worst") && err.contains("X1=0.4"), "{err}");
}
