use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str], cfg: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_counterprop"))
        .args(args)
        .arg("--config")
        .arg(cfg)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn stderr_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON object")
}

#[test]
fn design_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = config("degenerate.toml");
    for dir in [a.path(), b.path()] {
        let out = run(&["design"], &cfg, dir);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["datasheet.json", "summary.txt"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs");
    }
}

#[test]
fn seed_flag_reaches_the_datasheet() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_counterprop"))
        .args(["design", "--seed", "7", "--config"])
        .arg(config("degenerate.toml"))
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("datasheet.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["inputs"]["seed"]["value"], 7);
}

#[test]
fn no_solution_exits_2_and_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(config("degenerate.toml"))
        .unwrap()
        .replace("../crates/core/data/ktp.toml", &config("../crates/core/data/ktp.toml").display().to_string());
    let text = text.replace("l_range = [3, 64]", "l_range = [3, 5]");
    assert!(text.contains("l_range = [3, 5]"));
    let cfg = tmp.path().join("narrow.toml");
    std::fs::write(&cfg, text).unwrap();
    let out_dir = tmp.path().join("out");
    let out = run(&["design"], &cfg, &out_dir);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["exit_code"], 2);
    assert!(!out_dir.exists());
}

#[test]
fn short_pattern_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["pattern", "--length-um", "10"], &config("degenerate.toml"), dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["exit_code"], 1);
    assert!(err["error"]["message"].as_str().unwrap().len() > 0);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn missing_config_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["design"], &dir.path().join("absent.toml"), dir.path());
    assert_eq!(out.status.code(), Some(1));
    stderr_json(&out);
}

#[test]
fn spectrum_and_tune_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("nondegenerate.toml");
    for args in [&["spectrum", "--mode", "exact"][..], &["tune", "--tmin", "70", "--tmax", "80"]] {
        let out = run(args, &cfg, dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).contains("wrote "));
    }
    assert!(dir.path().join("spectrum_exact.csv").exists());
    let tune = std::fs::read_to_string(dir.path().join("tuning.csv")).unwrap();
    assert!(tune.lines().any(|l| l.starts_with("75.4997")));
}
