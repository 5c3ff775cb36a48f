use std::path::{Path, PathBuf};

use counterprop::biphoton::SpectrumMode;
use counterprop::report::{build_datasheet, cmd_design, cmd_pattern, cmd_spectrum, cmd_tune, RunConfig};
use serde_json::Value;

fn config(name: &str, out: &Path) -> RunConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    let mut cfg = RunConfig::load(path).unwrap();
    cfg.output_dir = out.to_path_buf();
    cfg
}

/// Every JSON number must sit in a `{value, unit}` object.
fn check_units(v: &Value, path: &str, parent_has_unit: bool) {
    match v {
        Value::Number(_) => assert!(parent_has_unit, "bare number at {path}"),
        Value::Object(map) => {
            let has_unit = map.get("unit").is_some_and(Value::is_string);
            for (k, x) in map {
                check_units(x, &format!("{path}.{k}"), has_unit && k == "value");
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                check_units(x, &format!("{path}[{i}]"), false);
            }
        }
        _ => {}
    }
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn datasheet_numbers_carry_units() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["degenerate.toml", "nondegenerate.toml"] {
        let sheet = build_datasheet(&config(name, dir.path())).unwrap();
        let v: Value = serde_json::from_str(&sheet.to_json()).unwrap();
        check_units(&v, "$", false);
        assert_eq!(v["config_sha256"].as_str().unwrap().len(), 64);
        assert!(v["material"]["provenance"].as_str().unwrap().contains("KTP"));
    }
}

#[test]
fn nondegenerate_datasheet_concurrence() {
    let dir = tempfile::tempdir().unwrap();
    let sheet = build_datasheet(&config("nondegenerate.toml", dir.path())).unwrap();
    assert!((sheet.figures.concurrence.value - 0.9978).abs() < 5e-4);
    assert_eq!(sheet.design.l.value, 21);
}

#[test]
fn design_outputs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (_, out_a) = cmd_design(&config("degenerate.toml", a.path())).unwrap();
    let (_, out_b) = cmd_design(&config("degenerate.toml", b.path())).unwrap();
    assert_eq!(out_a.files.len(), 2);
    for (x, y) in out_a.files.iter().zip(&out_b.files) {
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
    }
    // No temporary files left behind.
    assert_eq!(std::fs::read_dir(a.path()).unwrap().count(), 2);
}

#[test]
fn seed_changes_only_the_jitter_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("degenerate.toml", dir.path());
    let a = build_datasheet(&cfg).unwrap();
    cfg.seed += 1;
    let b = build_datasheet(&cfg).unwrap();
    assert_eq!(a.design, b.design);
    assert_eq!(a.figures, b.figures);
    assert_ne!(a.pattern_audit.jitter[1], b.pattern_audit.jitter[1]);
    // σ = 0 is exact whatever the seed.
    assert_eq!(a.pattern_audit.jitter[0], b.pattern_audit.jitter[0]);
}

#[test]
fn spectrum_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("degenerate.toml", dir.path());
    let out = cmd_spectrum(&cfg, SpectrumMode::Linearized).unwrap();
    let text = std::fs::read_to_string(&out.files[0]).unwrap();
    assert!(text.contains(&cfg.config_hash));
    assert!(text.contains("nu_ghz,density_hv,density_vh\n"));
    let rows: Vec<(f64, f64)> = data_rows(&text)
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    let peak = rows.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    assert_eq!(*peak, (0.0, 1.0));
    // Half-maximum crossings by linear interpolation.
    let crossing = |pair: &[(f64, f64)]| {
        let (a, b) = (pair[0], pair[1]);
        a.0 + (0.5 - a.1) / (b.1 - a.1) * (b.0 - a.0)
    };
    let c: Vec<f64> = rows
        .windows(2)
        .filter(|w| (w[0].1 - 0.5) * (w[1].1 - 0.5) < 0.0 && w[0].0.abs() < 5.0)
        .map(crossing)
        .collect();
    assert_eq!(c.len(), 2);
    let width = c[1] - c[0];
    assert!((width - 3.66).abs() / 3.66 < 0.02, "{width}");
    let span = rows.last().unwrap().0 - rows[0].0;
    assert!(span >= 6.0 * width);
}

#[test]
fn exact_and_linearized_spectra_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("nondegenerate.toml", dir.path());
    let lin = cmd_spectrum(&cfg, SpectrumMode::Linearized).unwrap();
    let ex = cmd_spectrum(&cfg, SpectrumMode::Exact).unwrap();
    let read = |p: &Path| data_rows(&std::fs::read_to_string(p).unwrap());
    let (a, b) = (read(&lin.files[0]), read(&ex.files[0]));
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        let nu: f64 = x[0].parse().unwrap();
        if nu.abs() <= 3.0 * 3.63 {
            for k in 1..3 {
                let (p, q): (f64, f64) = (x[k].parse().unwrap(), y[k].parse().unwrap());
                assert!((p - q).abs() < 0.01);
            }
        }
    }
}

#[test]
fn pattern_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("degenerate.toml", dir.path());
    let (audit, out) = cmd_pattern(&cfg, Some(1000.0)).unwrap();
    assert!((audit.min_domain.value - 0.528).abs() < 1e-3);
    assert!((audit.min_domain.value - audit.half_lambda1.value).abs() < 1e-9);
    for c in &audit.working_orders {
        assert!(c.aliased_residual.value < 1e-3, "{c:?}");
    }
    let text = std::fs::read_to_string(&out.files[0]).unwrap();
    assert!(text.contains("# l = 31"));
    assert!(text.contains(&cfg.config_hash));
    assert!(out.stdout.contains("min domain"));

    let err = cmd_pattern(&cfg, Some(10.0)).unwrap_err();
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn tune_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("degenerate.toml", dir.path());
    let out = cmd_tune(&cfg, None, None).unwrap();
    let text = std::fs::read_to_string(&out.files[0]).unwrap();
    assert!(text.contains("temperature_c,hv_signal_um,hv_idler_um,vh_signal_um,vh_idler_um\n"));
    let rows = data_rows(&text);
    let temps: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(temps.windows(2).all(|w| w[1] > w[0]));
    let design_row = rows.iter().find(|r| r[1] == "1.31" && r[2] == "1.31").unwrap();
    assert_eq!(design_row[3..], ["1.31".to_string(), "1.31".to_string()]);
}

#[test]
fn failed_design_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let mut cfg = config("degenerate.toml", &out);
    cfg.targets.l_range = (3, 5);
    let err = cmd_design(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(!out.exists());
}
