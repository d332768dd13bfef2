//! `widesense`: synthesize spectra, sense single captures, run Monte Carlo
//! experiments and summarize stored reports.
//!
//! Exit status is 0 on success, 1 on usage, configuration or I/O errors, and
//! 2 when a Monte Carlo run falls below its converged-fraction floor.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use widesense::harness::{
    export_report, read_report, run_monte_carlo, run_trial, ExperimentConfig, ExportFormat,
    McReport, TrialResult,
};
use widesense::io::write_json;
use widesense::recovery::{write_spectrum_csv, Method};
use widesense::signal::{synthesize_spectrum, write_spectrum_csv as write_truth_csv};
use widesense::Error;

#[derive(Parser, Debug)]
#[command(name = "widesense", version, about = "Compressive wideband spectrum sensing")]
struct Cli {
    /// Progress messages on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw one spectrum and write it with its occupancy mask.
    Synth(Common),
    /// Sense one capture with each method and write the recovered spectra.
    Sense(Common),
    /// Run a Monte Carlo experiment and export the report.
    Mc(McArgs),
    /// Print a summary of one or more stored report JSON files.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// TOML experiment configuration; built-in defaults when absent.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated subset of bp, lasso, asd.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    /// Number of compressive samples.
    #[arg(long)]
    m: Option<usize>,
    /// Distortion level.
    #[arg(long)]
    delta: Option<f64>,
    /// LASSO radius as a fraction of the measurement norm.
    #[arg(long)]
    mu_factor: Option<f64>,
    /// Frequency grid size.
    #[arg(long)]
    grid: Option<usize>,
    /// Any other configuration key, as `dotted.key=value` (TOML value syntax).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory.
    #[arg(short, long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct McArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// csv, json, or both.
    #[arg(long, default_value = "both")]
    format: String,
    /// Zero all wall-clock fields so repeated runs write identical files.
    #[arg(long)]
    no_timing: bool,
}

/// Applies `key=value` to a TOML rendering of the config, so unknown keys and
/// ill-typed values are rejected by the same deserializer as config files.
fn apply_override(cfg: ExperimentConfig, spec: &str) -> Result<ExperimentConfig> {
    let (key, raw) = spec
        .split_once('=')
        .with_context(|| format!("override `{spec}` is not of the form key=value"))?;
    let value: toml::Value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let mut root = toml::Value::try_from(&cfg).context("cannot render configuration")?;
    let parts: Vec<&str> = key.trim().split('.').collect();
    let mut node = &mut root;
    for part in &parts[..parts.len() - 1] {
        node = node
            .get_mut(*part)
            .with_context(|| format!("unknown configuration key `{key}`"))?;
    }
    let table = node
        .as_table_mut()
        .with_context(|| format!("`{key}` does not name a table entry"))?;
    table.insert(parts[parts.len() - 1].to_string(), value);
    root.try_into()
        .with_context(|| format!("override `{spec}` does not fit the configuration"))
}

fn load_config(c: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &c.config {
        Some(path) => widesense::io::read_toml(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(grid) = c.grid {
        cfg.profile.grid_size = grid;
        if c.m.is_none() && cfg.m > grid {
            cfg.m = grid / 2;
        }
    }
    if let Some(m) = c.m {
        cfg.m = m;
    }
    if let Some(d) = c.delta {
        cfg.delta = d;
    }
    if let Some(mu) = c.mu_factor {
        cfg.mu_factor = mu;
    }
    if let Some(methods) = &c.methods {
        cfg.methods = methods.clone();
    }
    for spec in &c.overrides {
        cfg = apply_override(cfg, spec)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

fn cmd_synth(c: &Common, verbose: bool) -> Result<()> {
    let cfg = load_config(c)?;
    create_dir(&c.out)?;
    let spectrum = synthesize_spectrum(&cfg.profile, c.seed)?;
    let spec_path = c.out.join("spectrum.csv");
    write_truth_csv(&spec_path, &cfg.profile, &spectrum)?;
    let occ_path = c.out.join("occupancy.csv");
    let partition = cfg.resolved_partition()?;
    widesense::io::write_csv(
        &occ_path,
        &["subband", "start_bin", "end_bin", "start_hz", "end_hz", "active"],
        (0..partition.k()).map(|j| {
            let (a, b) = (partition.edges[j], partition.edges[j + 1]);
            let w = cfg.profile.bin_width();
            let lo = cfg.profile.freq_span.low;
            vec![
                (j + 1).to_string(),
                a.to_string(),
                b.to_string(),
                (lo + a as f64 * w).to_string(),
                (lo + b as f64 * w).to_string(),
                partition.active[j].to_string(),
            ]
        }),
    )?;
    if verbose {
        eprintln!("wrote {} and {}", spec_path.display(), occ_path.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct SenseOutput<'a> {
    config: &'a ExperimentConfig,
    trial: &'a TrialResult,
}

fn cmd_sense(c: &Common, verbose: bool) -> Result<()> {
    let cfg = load_config(c)?;
    create_dir(&c.out)?;
    let trial = run_trial(&cfg, c.seed)?;
    let truth = synthesize_spectrum(&cfg.profile, c.seed)?;
    write_truth_csv(&c.out.join("truth.csv"), &cfg.profile, &truth)?;
    for (method, r) in &trial.spectra {
        let path = c.out.join(format!("spectrum_{method}.csv"));
        write_spectrum_csv(&path, r)?;
        if verbose {
            let o = trial.outcome(*method).unwrap();
            eprintln!(
                "{method}: {:?} after {} iterations, objective {:.6e}",
                o.status, o.iterations, o.objective_value
            );
        }
    }
    write_json(
        &c.out.join("diagnostics.json"),
        &SenseOutput {
            config: &cfg,
            trial: &trial,
        },
    )?;
    Ok(())
}

/// Returns whether every method met the converged-fraction floor.
fn cmd_mc(a: &McArgs, verbose: bool) -> Result<bool> {
    let mut cfg = load_config(&a.common)?;
    cfg.base_seed = a.common.seed;
    if let Some(t) = a.trials {
        cfg.n_trials = t;
    }
    cfg.validate()?;
    let formats = match a.format.as_str() {
        "both" => vec![ExportFormat::Csv, ExportFormat::Json],
        other => vec![other.parse::<ExportFormat>()?],
    };
    if verbose {
        eprintln!(
            "running {} trials of N = {}, M = {} on {} worker(s)",
            cfg.n_trials,
            cfg.n(),
            cfg.m,
            a.parallel
        );
    }
    let mut report = run_monte_carlo(&cfg, a.parallel)?;
    if a.no_timing {
        report = report.without_timing();
    }
    for f in formats {
        for path in export_report(&report, &a.common.out, f)? {
            if verbose {
                eprintln!("wrote {}", path.display());
            }
        }
    }
    print!("{}", summary(&report, None));
    match report.check_convergence() {
        Ok(()) => Ok(true),
        Err(e) => {
            eprintln!("error: {e}");
            Ok(false)
        }
    }
}

fn row(label: &str, values: impl Iterator<Item = String>) -> String {
    let mut s = format!("{label:<16}");
    for v in values {
        s.push_str(&format!("{v:>9}"));
    }
    s.push('\n');
    s
}

fn summary(report: &McReport, label: Option<&str>) -> String {
    let k = report.active_mask.len();
    let prefix = label.map(|l| format!("{l}:")).unwrap_or_default();
    let mut out = String::new();
    out.push_str(&row("subband", (1..=k).map(|j| j.to_string())));
    out.push_str(&row("active", report.active_mask.iter().map(|a| if *a { "yes" } else { "no" }.to_string())));
    for m in [Method::Lasso, Method::Asd, Method::Bp] {
        if let Some(e) = report.mean_energies.get(&m) {
            out.push_str(&row(&format!("{prefix}{m}"), e.iter().map(|v| format!("{v:.4}"))));
        }
    }
    if let Some(e) = &report.eer_of_means {
        out.push_str(&row(
            &format!("{prefix}eer"),
            e.iter().map(|v| v.map_or("-".into(), |v| format!("{v:.4}"))),
        ));
    }
    for (m, c) in &report.converged {
        let rate = report.detection_rate.get(m).copied().unwrap_or(0.0);
        out.push_str(&format!(
            "{prefix}{m}: converged {c}/{}, exact detection {:.1}%, mean solve {:.3}s\n",
            report.n_trials,
            100.0 * rate,
            report.mean_wall_time.get(m).copied().unwrap_or(0.0)
        ));
    }
    out
}

fn cmd_report(files: &[PathBuf]) -> Result<()> {
    let reports: Vec<McReport> = files
        .iter()
        .map(|p| read_report(p).map_err(anyhow::Error::from))
        .collect::<Result<_>>()?;
    if reports.len() == 1 {
        print!("{}", summary(&reports[0], None));
        return Ok(());
    }
    let k = reports[0].active_mask.len();
    if reports.iter().any(|r| r.active_mask.len() != k) {
        bail!("reports have different subband layouts");
    }
    print!("{}", row("subband", (1..=k).map(|j| j.to_string())));
    for (i, (path, r)) in files.iter().zip(&reports).enumerate() {
        println!("[{}] {}", i + 1, path.display());
        let tag = format!("{}", i + 1);
        for (m, e) in &r.mean_energies {
            print!("{}", row(&format!("{tag}:{m}"), e.iter().map(|v| format!("{v:.4}"))));
        }
        if let Some(e) = &r.eer_of_means {
            print!("{}", row(&format!("{tag}:eer"), e.iter().map(|v| v.map_or("-".into(), |v| format!("{v:.4}")))));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Synth(c) => cmd_synth(c, cli.verbose).map(|_| true),
        Command::Sense(c) => cmd_sense(c, cli.verbose).map(|_| true),
        Command::Mc(a) => cmd_mc(a, cli.verbose),
        Command::Report { files } => cmd_report(files).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            // library errors already embed their cause in the message
            let mut msg = String::new();
            for cause in e.chain() {
                let text = cause.to_string();
                if !msg.contains(text.trim()) {
                    if !msg.is_empty() {
                        msg.push_str(": ");
                    }
                    msg.push_str(text.trim());
                }
            }
            eprintln!("error: {msg}");
            if let Some(Error::Dimension(_)) = e.downcast_ref::<Error>() {
                eprintln!("hint: the number of samples cannot exceed the grid size");
            }
            ExitCode::from(1)
        }
    }
}
