use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use caputo_sirs_cli::config::OUT_DIR_ENV;
use caputo_sirs_cli::csv::parse_trajectory_csv;
use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_caputo-sirs"));
    c.env_remove(OUT_DIR_ENV);
    c
}

fn config(mu: f64, alpha: f64, horizon: f64, out: &Path) -> Value {
    json!({
        "params": {"Lambda": 0.8, "mu": mu, "beta": 0.1, "lambda": 0.5,
                   "r": 0.5, "k1": 0.1, "k2": 0.02, "k3": 0.003},
        "initial": {"S0": 10.0, "I0": 1.0, "R0": 1.0},
        "grid": {"alpha": alpha, "step_h": 0.05, "horizon_T": horizon},
        "outputs": {"csv": true, "json": true, "svg": false},
        "output_dir": out,
    })
}

fn write_config(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

fn run(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    if !out.status.success() {
        eprintln!("stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    out
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_reports_thresholds_of_both_presets() {
    let tmp = tempfile::tempdir().unwrap();
    for (mu, r0, endemic) in [(0.1, 0.7407, false), (0.02, 1.5385, true)] {
        let out = tmp.path().join(format!("mu{mu}"));
        let cfg = write_config(tmp.path(), "c.json", &config(mu, 0.85, 10.0, &out));
        let o = run(bin().args(["analyze", "--config"]).arg(&cfg));
        assert_eq!(o.status.code(), Some(0));
        let rep = read_json(&out.join("report.json"));
        assert!((rep["r0"].as_f64().unwrap() - r0).abs() < 5e-5);
        assert_eq!(!rep["endemic"].is_null(), endemic);
        let by_alpha = &rep["stability"][0]["by_alpha"][0];
        assert_eq!(by_alpha["alpha"].as_f64(), Some(0.85));
        assert_eq!(by_alpha["matignon_stable"].as_bool(), Some(!endemic));
        assert_eq!(rep["stability"][0]["eigenvalues"].as_array().unwrap().len(), 3);
        if endemic {
            assert!(rep["closed_form_discrepancy"].as_f64().unwrap() > 1.0);
            assert!(!rep["open_flags"].as_array().unwrap().is_empty());
        }
    }
}

#[test]
fn simulate_writes_one_row_per_grid_point() {
    let tmp = tempfile::tempdir().unwrap();
    for (horizon, rows) in [(10.0, 201), (10.01, 202), (1.0, 21)] {
        let cfg = write_config(tmp.path(), "c.json", &config(0.1, 0.9, horizon, tmp.path()));
        let o = run(bin().args(["simulate", "--svg", "--config"]).arg(&cfg));
        assert_eq!(o.status.code(), Some(0));
        let text = std::fs::read_to_string(tmp.path().join("trajectory.csv")).unwrap();
        assert!(!text.contains('\r'));
        let parsed = parse_trajectory_csv(&text).unwrap();
        assert_eq!(parsed.len(), rows, "T = {horizon}");
        assert!(parsed.iter().all(|r| r.lyapunov.is_some()));
        let svg = std::fs::read_to_string(tmp.path().join("trajectory.svg")).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("α = 0.9"));
        let rep = read_json(&tmp.path().join("run_report.json"));
        assert_eq!(rep["invariant_violations"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn repeated_runs_overwrite_with_identical_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", &config(0.02, 0.85, 20.0, tmp.path()));
    let csv = tmp.path().join("trajectory.csv");
    std::fs::write(&csv, "stale content that must disappear\n".repeat(10_000)).unwrap();
    run(bin().args(["simulate", "--config"]).arg(&cfg));
    let first = std::fs::read(&csv).unwrap();
    run(bin().args(["simulate", "--config"]).arg(&cfg));
    assert_eq!(first, std::fs::read(&csv).unwrap());
    assert!(first.starts_with(b"t,S,I,R,N,lyapunov\n"));
}

#[test]
fn environment_overrides_output_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let configured = tmp.path().join("configured");
    let forced = tmp.path().join("forced");
    let cfg = write_config(tmp.path(), "c.json", &config(0.1, 1.0, 1.0, &configured));
    let o = run(bin()
        .env(OUT_DIR_ENV, &forced)
        .args(["analyze", "--config"])
        .arg(&cfg));
    assert_eq!(o.status.code(), Some(0));
    assert!(forced.join("report.json").exists());
    assert!(!configured.exists());
}

#[test]
fn sweep_dedups_and_matches_simulate() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", &config(0.02, 0.9, 30.0, tmp.path()));
    let o = run(bin()
        .args(["sweep", "--alphas", "0.9,0.85,0.9,1", "--config"])
        .arg(&cfg));
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate alpha 0.9"));
    let summary = read_json(&tmp.path().join("summary.json"));
    let alphas: Vec<f64> = summary
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["alpha"].as_f64().unwrap())
        .collect();
    assert_eq!(alphas, [0.9, 0.85, 1.0]);
    for e in summary.as_array().unwrap() {
        assert!(e["error"].is_null());
        assert!(e["run"]["final_state"]["I"].as_f64().unwrap() > 0.0);
    }
    let overlay = std::fs::read_to_string(tmp.path().join("sweep_infectives.svg")).unwrap();
    assert_eq!(overlay.matches("<polyline").count(), 3);

    let swept = std::fs::read(tmp.path().join("trajectory_alpha_0.9.csv")).unwrap();
    run(bin().args(["simulate", "--config"]).arg(&cfg));
    assert_eq!(swept, std::fs::read(tmp.path().join("trajectory.csv")).unwrap());
}

#[test]
fn reproduce_writes_figure_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(bin()
        .args(["reproduce", "--figure", "fig2", "--out"])
        .arg(tmp.path()));
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("R*") && stdout.contains("0.552") && stdout.contains("DISCREPANCY"));
    for a in ["0.85", "0.9", "0.95", "1"] {
        assert!(tmp.path().join(format!("fig2_trajectory_alpha_{a}.csv")).exists());
        assert!(tmp.path().join(format!("fig2_trajectory_alpha_{a}.svg")).exists());
    }
    for f in ["report.json", "fig2_summary.json", "fig2_infectives.svg", "fig2_comparison.txt"] {
        assert!(tmp.path().join(f).exists(), "{f}");
    }
    let rep = read_json(&tmp.path().join("report.json"));
    assert_eq!(rep["stability"][1]["by_alpha"].as_array().unwrap().len(), 4);
    let last = std::fs::read_to_string(tmp.path().join("fig2_trajectory_alpha_1.csv")).unwrap();
    assert_eq!(last.lines().count(), 1 + 1 + 10_000);
}

#[test]
fn usage_and_output_errors_map_to_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(bin().args(["reproduce", "--figure", "fig3"]));
    assert_eq!(o.status.code(), Some(2));
    let o = run(bin().args(["analyze", "--config"]).arg(tmp.path().join("missing.json")));
    assert_eq!(o.status.code(), Some(2));
    let cfg = write_config(tmp.path(), "c.json", &config(0.1, 0.9, 1.0, tmp.path()));
    let o = run(bin().args(["sweep", "--alphas", "0.5,1.5", "--config"]).arg(&cfg));
    assert_eq!(o.status.code(), Some(2));
    let o = run(bin().args(["sweep", "--alphas", "x", "--config"]).arg(&cfg));
    assert_eq!(o.status.code(), Some(2));

    // a regular file where a directory is needed
    let blocker = tmp.path().join("blocker");
    std::fs::write(&blocker, "").unwrap();
    let cfg = write_config(tmp.path(), "c.json", &config(0.1, 0.9, 1.0, &blocker.join("sub")));
    for cmd in ["analyze", "simulate"] {
        let o = run(bin().args([cmd, "--config"]).arg(&cfg));
        assert_eq!(o.status.code(), Some(4), "{cmd}");
    }
    let o = run(bin().args(["reproduce", "--figure", "fig1", "--out"]).arg(blocker.join("x")));
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn step_guard_and_malformed_json_are_config_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let mut v = config(0.1, 1.0, 100.0, tmp.path());
    v["grid"]["step_h"] = json!(20.0);
    let cfg = write_config(tmp.path(), "c.json", &v);
    let o = run(bin().args(["simulate", "--config"]).arg(&cfg));
    assert_eq!(o.status.code(), Some(2));

    let path = tmp.path().join("broken.json");
    std::fs::write(&path, "{\n  \"params\": {\n    \"Lambda\": 0.8,,\n").unwrap();
    let o = run(bin().args(["analyze", "--config"]).arg(&path));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}
