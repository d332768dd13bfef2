use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use widesense::harness::{run_trial, ExperimentConfig, McReport};
use widesense::recovery::{write_spectrum_csv, Method};

fn widesense(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_widesense"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = widesense(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn small_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.profile.grid_size = 64;
    cfg.m = 32;
    cfg
}

#[test]
fn synth_writes_the_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["synth", "--seed", "1", "--out", p(dir.path())]);
    let mut rdr = csv::Reader::from_path(dir.path().join("spectrum.csv")).unwrap();
    let occ: Vec<bool> = rdr
        .records()
        .map(|r| r.unwrap()[5].parse().unwrap())
        .collect();
    assert_eq!(occ.len(), 512);
    let runs = occ.windows(2).filter(|w| !w[0] && w[1]).count() + usize::from(occ[0]);
    assert_eq!(runs, 4);
    let table = fs::read_to_string(dir.path().join("occupancy.csv")).unwrap();
    assert_eq!(table.lines().count(), 10);
}

#[test]
fn synth_grid_override() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["synth", "--grid", "256", "--out", p(dir.path())]);
    let text = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(text.lines().count(), 257);
}

#[test]
fn missing_config_names_the_path() {
    let out = widesense(&["synth", "--config", "/definitely/not/here.toml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/definitely/not/here.toml"));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("exp.toml");
    fs::write(&cfg_path, "m = 16\nmethods = [\"bp\"]\ndelta = 0.0\n[profile]\ngrid_size = 32\nfreq_span = { low = 0.0, high = 500e6 }\nbands = []\nnoise_floor_range = { low = 0.0, high = 1.0 }\nsnr_db = \"inf\"\n").unwrap();
    let out = dir.path().join("o");
    ok(&["sense", "--config", p(&cfg_path), "--set", "threshold=0.1", "--out", p(&out)]);
    let diag: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("diagnostics.json")).unwrap()).unwrap();
    assert_eq!(diag["config"]["threshold"], 0.1);
    assert_eq!(diag["config"]["profile"]["grid_size"], 32);
    let bad = widesense(&["sense", "--config", p(&cfg_path), "--set", "nonsense=1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sense_writes_one_spectrum_per_method() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["sense", "--grid", "64", "--m", "32", "--methods", "lasso,asd", "--out", p(dir.path())]);
    for f in ["spectrum_lasso.csv", "spectrum_asd.csv", "diagnostics.json", "truth.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert!(!dir.path().join("spectrum_bp.csv").exists());
}

#[test]
fn sense_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "sense", "--grid", "64", "--m", "32", "--methods", "bp", "--delta", "0", "--seed", "7",
        "--out", p(dir.path()),
    ]);
    let mut cfg = small_config();
    cfg.methods = vec![Method::Bp];
    cfg.delta = 0.0;
    let t = run_trial(&cfg, 7).unwrap();
    let lib = dir.path().join("lib.csv");
    write_spectrum_csv(&lib, &t.spectra[&Method::Bp]).unwrap();
    assert_eq!(
        fs::read(dir.path().join("spectrum_bp.csv")).unwrap(),
        fs::read(lib).unwrap()
    );
}

#[test]
fn too_many_samples_is_a_dimension_error() {
    let out = widesense(&["sense", "--m", "1024"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension"));
}

#[test]
fn single_trial_monte_carlo() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["mc", "--grid", "64", "--m", "32", "--trials", "1", "--seed", "3", "--out", p(dir.path())]);
    let text = fs::read_to_string(dir.path().join("report.json")).unwrap();
    let rep: McReport = serde_json::from_str(&text).unwrap();
    let t = run_trial(&small_config(), 3).unwrap();
    for m in [Method::Lasso, Method::Asd] {
        assert_eq!(rep.mean_energies[&m], t.report.energies[&m]);
    }
    let table = fs::read_to_string(dir.path().join("energy_table.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.split(',').count() == 10));
}

#[test]
fn monte_carlo_output_is_repeatable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        ok(&[
            "mc", "--grid", "64", "--m", "32", "--trials", "2", "--parallel", "2", "--no-timing",
            "--out", p(d.path()),
        ]);
    }
    for f in ["report.json", "energy_table.csv", "subbands.csv", "spectrum_magnitude.csv", "trials.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn convergence_breach_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = widesense(&[
        "mc", "--grid", "64", "--m", "32", "--trials", "2", "--set", "solver.max_iters=5",
        "--out", p(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(dir.path().join("report.json").exists());
}

#[test]
fn report_prints_tables() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["mc", "--grid", "64", "--m", "32", "--trials", "1", "--format", "json", "--out", p(dir.path())]);
    let json = dir.path().join("report.json");
    let out = ok(&["report", p(&json)]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("lasso")));
    assert!(text.lines().any(|l| l.starts_with("asd")));
    assert!(text.lines().any(|l| l.starts_with("eer")));
    let both = ok(&["report", p(&json), p(&json)]);
    let text = String::from_utf8_lossy(&both.stdout);
    assert!(text.contains("1:asd") && text.contains("2:asd"));
    let missing = widesense(&["report", "/no/such/report.json"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn unknown_format_and_usage_errors() {
    let out = widesense(&["mc", "--grid", "64", "--m", "32", "--trials", "1", "--format", "xml"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(widesense(&["bogus"]).status.code(), Some(1));
    assert_eq!(widesense(&["--help"]).status.code(), Some(0));
}
