//! Seeded trials and Monte Carlo aggregation.
//!
//! A trial draws one spectrum, one noise realization, one selection and one
//! perturbation from its seed, then hands the same `(B, y)` to every method.
//! Trials run in parallel but are reduced in seed order, so a report does not
//! depend on the worker count. Wall-clock timings are the only
//! non-reproducible fields; [`McReport::without_timing`] zeroes them.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::detection::{
    default_partition, detect, eer, partition_for_profile, subband_energies, write_energy_table,
    Partition, SubbandReport, DEFAULT_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::fourier::l2_norm;
use crate::io::{fmt_f64, read_json, read_toml, write_csv, write_json};
use crate::measurement::{
    acquire, ideal_matrix, make_selection, perturb_with, CMatrix, PerturbationModel,
};
use crate::recovery::{solve_asd, solve_bp, solve_lasso, Method, RecoveryResult};
use crate::signal::{add_awgn, default_profile, spectrum_to_time, synthesize_spectrum, SpectrumProfile};
use crate::solver::{KktResiduals, SolveStatus, SolverOptions};

/// How the configured `delta` maps to the bound on `|V[m, k]|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaScale {
    /// `delta` is relative to the entry modulus `1/sqrt(N)` of the ideal operator.
    #[default]
    EntryModulus,
    /// `delta` bounds the entries directly.
    Absolute,
}

/// The `delta` handed to the distortion-aware program.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverDelta {
    /// The per-entry bound used to draw `V`.
    #[default]
    Element,
    /// The realized `||V||_inf`.
    RealizedNorm,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub profile: SpectrumProfile,
    /// Number of compressive samples.
    pub m: usize,
    pub delta: f64,
    pub delta_scale: DeltaScale,
    pub solver_delta: SolverDelta,
    pub perturbation: PerturbationModel,
    /// LASSO radius as a fraction of `||y||_2`.
    pub mu_factor: f64,
    pub n_trials: usize,
    pub base_seed: u64,
    pub methods: Vec<Method>,
    pub solver: SolverOptions,
    pub threshold: f64,
    /// Subband edges in bins; derived from the profile's bands when absent.
    pub partition: Option<Partition>,
    /// Below this converged fraction a run is reported as failed.
    pub min_converged_fraction: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            profile: default_profile(),
            m: 256,
            delta: 0.7,
            delta_scale: DeltaScale::EntryModulus,
            solver_delta: SolverDelta::Element,
            perturbation: PerturbationModel::UniformModulus,
            mu_factor: 0.1,
            n_trials: 100,
            base_seed: 0,
            methods: vec![Method::Lasso, Method::Asd],
            solver: SolverOptions::default(),
            threshold: DEFAULT_THRESHOLD,
            partition: None,
            min_converged_fraction: 0.9,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let cfg: Self = read_toml(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn n(&self) -> usize {
        self.profile.grid_size
    }

    /// Bound on `|V[m, k]|`.
    pub fn delta_elem(&self) -> f64 {
        match self.delta_scale {
            DeltaScale::EntryModulus => self.delta / (self.n() as f64).sqrt(),
            DeltaScale::Absolute => self.delta,
        }
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.base_seed.wrapping_add(trial as u64)
    }

    pub fn resolved_partition(&self) -> Result<Partition> {
        match &self.partition {
            Some(p) => {
                let n = self.n();
                if p.edges.len() != p.active.len() + 1
                    || p.edges.first() != Some(&0)
                    || p.edges.last() != Some(&n)
                    || p.edges.windows(2).any(|w| w[1] <= w[0])
                {
                    return Err(Error::config(format!(
                        "partition must have strictly increasing edges from 0 to {n} and one flag per subband"
                    )));
                }
                Ok(p.clone())
            }
            None if self.profile.bands.is_empty() => default_partition(self.n()),
            None => partition_for_profile(&self.profile),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        let n = self.n();
        if self.m == 0 {
            return Err(Error::config("m must be positive"));
        }
        if self.m > n {
            return Err(Error::dimension(format!("M = {} exceeds N = {n}", self.m)));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::config(format!("delta must be finite and >= 0, got {}", self.delta)));
        }
        if !(self.mu_factor >= 0.0 && self.mu_factor.is_finite()) {
            return Err(Error::config(format!("mu_factor must be finite and >= 0, got {}", self.mu_factor)));
        }
        if self.n_trials == 0 {
            return Err(Error::config("n_trials must be positive"));
        }
        if self.methods.is_empty() {
            return Err(Error::config("at least one method is required"));
        }
        if !(self.threshold >= 0.0) {
            return Err(Error::config(format!("threshold must be >= 0, got {}", self.threshold)));
        }
        if !(0.0..=1.0).contains(&self.min_converged_fraction) {
            return Err(Error::config("min_converged_fraction must be in [0, 1]"));
        }
        if self.methods.contains(&Method::Asd) {
            let positive = match self.solver_delta {
                SolverDelta::Element | SolverDelta::RealizedNorm => self.delta > 0.0,
                SolverDelta::Fixed(d) => d > 0.0 && d.is_finite(),
            };
            if !positive {
                return Err(Error::config(
                    "the distortion-aware program needs a positive solver delta",
                ));
            }
        }
        self.resolved_partition()?;
        Ok(())
    }
}

/// What one method did on one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodOutcome {
    pub method: Method,
    /// SHA-256 of the `(B, y)` the method received.
    pub input_hash: String,
    pub status: SolveStatus,
    pub iterations: usize,
    pub primal_res: f64,
    pub dual_res: f64,
    pub gap: f64,
    pub kkt: KktResiduals,
    pub objective_value: f64,
    pub epigraph_t: Option<f64>,
    /// `||r_hat - r||_2 / ||r||_2` against the synthesized spectrum.
    pub relative_error: f64,
    pub wall_time: f64,
}

impl MethodOutcome {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub seed: u64,
    pub delta_elem: f64,
    /// Realized `||V||_inf`.
    pub delta_norm: f64,
    pub solver_delta: f64,
    pub mu: f64,
    pub y_norm: f64,
    pub outcomes: Vec<MethodOutcome>,
    pub true_energies: Vec<f64>,
    /// Methods whose recovered spectrum is identically zero are left out.
    pub report: SubbandReport,
    #[serde(skip)]
    pub spectra: BTreeMap<Method, Vec<Complex64>>,
    #[serde(skip)]
    pub truth: Vec<Complex64>,
}

impl TrialResult {
    pub fn outcome(&self, method: Method) -> Option<&MethodOutcome> {
        self.outcomes.iter().find(|o| o.method == method)
    }
}

/// SHA-256 over the little-endian bytes of `B` (column-major) and `y`.
pub fn input_hash(b: &CMatrix, y: &[Complex64]) -> String {
    let mut h = Sha256::new();
    for z in b.iter().chain(y) {
        h.update(z.re.to_le_bytes());
        h.update(z.im.to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn relative_error(r_hat: &[Complex64], r: &[Complex64]) -> f64 {
    let diff: Vec<Complex64> = r_hat.iter().zip(r).map(|(a, b)| a - b).collect();
    l2_norm(&diff) / l2_norm(r)
}

/// One seeded capture recovered by every configured method.
pub fn run_trial(config: &ExperimentConfig, seed: u64) -> Result<TrialResult> {
    config.validate()?;
    let partition = config.resolved_partition()?;
    let profile = &config.profile;

    let spectrum = synthesize_spectrum(profile, seed).map_err(|e| e.in_stage("synthesis"))?;
    let clean = spectrum_to_time(&spectrum, profile.sample_rate());
    let x = if profile.snr_db.is_finite() {
        add_awgn(&clean, profile.snr_db, seed).map_err(|e| e.in_stage("channel noise"))?
    } else {
        clean
    };

    let sel = make_selection(config.n(), config.m, seed).map_err(|e| e.in_stage("selection"))?;
    let ms = perturb_with(&ideal_matrix(&sel), config.delta_elem(), config.perturbation, seed)
        .map_err(|e| e.in_stage("perturbation"))?;
    let y = acquire(&x, &sel).map_err(|e| e.in_stage("acquisition"))?;
    let y_norm = l2_norm(&y);
    let mu = config.mu_factor * y_norm;
    let solver_delta = match config.solver_delta {
        SolverDelta::Element => ms.delta_elem,
        SolverDelta::RealizedNorm => ms.delta_norm,
        SolverDelta::Fixed(d) => d,
    };

    let mut outcomes = Vec::with_capacity(config.methods.len());
    let mut spectra = BTreeMap::new();
    for &method in &config.methods {
        let input_hash = input_hash(&ms.b, &y);
        let res: RecoveryResult = match method {
            Method::Bp => solve_bp(&ms.b, &y, &config.solver),
            Method::Lasso => solve_lasso(&ms.b, &y, mu, &config.solver),
            Method::Asd => solve_asd(&ms.b, &y, solver_delta, &config.solver),
        }
        .map_err(|e| e.in_stage("recovery"))?;
        let d = &res.diagnostics;
        outcomes.push(MethodOutcome {
            method,
            input_hash,
            status: d.status,
            iterations: d.iterations,
            primal_res: d.primal_res,
            dual_res: d.dual_res,
            gap: d.gap,
            kkt: d.kkt,
            objective_value: res.objective_value,
            epigraph_t: res.epigraph_t,
            relative_error: relative_error(&res.r_hat, &spectrum.r),
            wall_time: res.wall_time,
        });
        spectra.insert(method, res.r_hat);
    }

    let true_energies =
        subband_energies(&spectrum.r, &partition.edges).map_err(|e| e.in_stage("detection"))?;
    let nonzero: Vec<(Method, &[Complex64])> = spectra
        .iter()
        .filter(|(_, r)| r.iter().any(|z| z.norm_sqr() > 0.0))
        .map(|(m, r)| (*m, r.as_slice()))
        .collect();
    let report = SubbandReport::build(&partition, &nonzero, config.threshold)
        .map_err(|e| e.in_stage("detection"))?;

    Ok(TrialResult {
        seed,
        delta_elem: ms.delta_elem,
        delta_norm: ms.delta_norm,
        solver_delta,
        mu,
        y_norm,
        outcomes,
        true_energies,
        report,
        spectra,
        truth: spectrum.r,
    })
}

/// Aggregate over all trials. Per-method statistics use only the trials in
/// which that method converged; comparisons between two methods use only the
/// trials in which both did.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub config: ExperimentConfig,
    pub n_trials: usize,
    pub edges: Vec<usize>,
    pub active_mask: Vec<bool>,
    pub converged: BTreeMap<Method, usize>,
    pub mean_energies: BTreeMap<Method, Vec<f64>>,
    pub std_energies: BTreeMap<Method, Vec<f64>>,
    pub true_mean_energies: Vec<f64>,
    /// Decisions taken on the mean energies.
    pub mean_decisions: BTreeMap<Method, Vec<bool>>,
    /// Fraction of converged trials whose decisions match the ground truth.
    pub detection_rate: BTreeMap<Method, f64>,
    /// Enhancement ratio of the mean energies, distortion-aware over LASSO.
    pub eer_of_means: Option<Vec<Option<f64>>>,
    /// Per-subband average of the per-trial enhancement ratios.
    pub mean_eer: Option<Vec<Option<f64>>>,
    pub mean_abs_eer: Option<Vec<Option<f64>>>,
    pub mean_relative_error: BTreeMap<Method, f64>,
    pub bin_freqs: Vec<f64>,
    pub mean_magnitude: BTreeMap<Method, Vec<f64>>,
    pub true_mean_magnitude: Vec<f64>,
    /// Mean seconds per solve.
    pub mean_wall_time: BTreeMap<Method, f64>,
    pub trials: Vec<TrialResult>,
}

fn mean_std(rows: &[&[f64]]) -> (Vec<f64>, Vec<f64>) {
    let k = rows[0].len();
    let n = rows.len() as f64;
    let mut mean = vec![0.0; k];
    for r in rows {
        for (m, v) in mean.iter_mut().zip(r.iter()) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; k];
    if rows.len() > 1 {
        for r in rows {
            for ((s, v), m) in var.iter_mut().zip(r.iter()).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        var.iter_mut().for_each(|s| *s /= n - 1.0);
    }
    (mean, var.into_iter().map(f64::sqrt).collect())
}

fn mean_defined(values: &[Vec<Option<f64>>], k: usize, f: impl Fn(f64) -> f64) -> Vec<Option<f64>> {
    (0..k)
        .map(|j| {
            let defined: Vec<f64> = values.iter().filter_map(|v| v[j]).map(&f).collect();
            (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
        })
        .collect()
}

fn mean_magnitudes<'a>(spectra: impl Iterator<Item = &'a [Complex64]>, n: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n];
    let mut count = 0usize;
    for r in spectra {
        for (a, z) in acc.iter_mut().zip(r) {
            *a += z.norm();
        }
        count += 1;
    }
    if count > 0 {
        acc.iter_mut().for_each(|a| *a /= count as f64);
    }
    acc
}

impl McReport {
    /// Reduces trials in the order given.
    pub fn aggregate(config: &ExperimentConfig, trials: Vec<TrialResult>) -> Result<Self> {
        let partition = config.resolved_partition()?;
        let n = config.n();
        let k = partition.k();
        let mut converged = BTreeMap::new();
        let mut mean_energies = BTreeMap::new();
        let mut std_energies = BTreeMap::new();
        let mut mean_decisions = BTreeMap::new();
        let mut detection_rate = BTreeMap::new();
        let mut mean_relative_error = BTreeMap::new();
        let mut mean_magnitude = BTreeMap::new();
        let mut mean_wall_time = BTreeMap::new();

        for &method in &config.methods {
            let ok: Vec<&TrialResult> = trials
                .iter()
                .filter(|t| t.outcome(method).is_some_and(MethodOutcome::converged))
                .collect();
            converged.insert(method, ok.len());
            let times: Vec<f64> = trials
                .iter()
                .filter_map(|t| t.outcome(method).map(|o| o.wall_time))
                .collect();
            if !times.is_empty() {
                mean_wall_time.insert(method, times.iter().sum::<f64>() / times.len() as f64);
            }
            if ok.is_empty() {
                continue;
            }
            let with_energy: Vec<&[f64]> = ok
                .iter()
                .filter_map(|t| t.report.energies.get(&method).map(Vec::as_slice))
                .collect();
            if !with_energy.is_empty() {
                let (mean, std) = mean_std(&with_energy);
                mean_decisions.insert(method, detect(&mean, config.threshold)?);
                mean_energies.insert(method, mean);
                std_energies.insert(method, std);
            }
            let hits = ok
                .iter()
                .filter(|t| t.report.exact_detection(method) == Some(true))
                .count();
            detection_rate.insert(method, hits as f64 / ok.len() as f64);
            let err: f64 = ok
                .iter()
                .map(|t| t.outcome(method).unwrap().relative_error)
                .sum();
            mean_relative_error.insert(method, err / ok.len() as f64);
            mean_magnitude.insert(
                method,
                mean_magnitudes(ok.iter().filter_map(|t| t.spectra.get(&method).map(Vec::as_slice)), n),
            );
        }

        let eer_of_means = match (mean_energies.get(&Method::Asd), mean_energies.get(&Method::Lasso)) {
            (Some(new), Some(std)) => Some(eer(new, std, &partition.active)?),
            _ => None,
        };
        let paired: Vec<Vec<Option<f64>>> = trials
            .iter()
            .filter(|t| {
                [Method::Asd, Method::Lasso]
                    .iter()
                    .all(|m| t.outcome(*m).is_some_and(MethodOutcome::converged))
            })
            .filter_map(|t| t.report.eer.clone())
            .collect();
        let (mean_eer, mean_abs_eer) = if paired.is_empty() {
            (None, None)
        } else {
            (
                Some(mean_defined(&paired, k, |v| v)),
                Some(mean_defined(&paired, k, f64::abs)),
            )
        };

        let true_rows: Vec<&[f64]> = trials.iter().map(|t| t.true_energies.as_slice()).collect();
        let true_mean_energies = if true_rows.is_empty() {
            vec![0.0; k]
        } else {
            mean_std(&true_rows).0
        };

        Ok(Self {
            config: config.clone(),
            n_trials: trials.len(),
            edges: partition.edges,
            active_mask: partition.active,
            converged,
            mean_energies,
            std_energies,
            true_mean_energies,
            mean_decisions,
            detection_rate,
            eer_of_means,
            mean_eer,
            mean_abs_eer,
            mean_relative_error,
            bin_freqs: (0..n).map(|b| config.profile.bin_center(b)).collect(),
            mean_magnitude,
            true_mean_magnitude: mean_magnitudes(trials.iter().map(|t| t.truth.as_slice()), n),
            mean_wall_time,
            trials,
        })
    }

    pub fn converged_fraction(&self, method: Method) -> f64 {
        let c = self.converged.get(&method).copied().unwrap_or(0);
        c as f64 / self.n_trials.max(1) as f64
    }

    /// Fails when any method converged in fewer than the configured fraction
    /// of trials.
    pub fn check_convergence(&self) -> Result<()> {
        for (&method, &c) in &self.converged {
            if self.converged_fraction(method) < self.config.min_converged_fraction {
                return Err(Error::Convergence {
                    method: method.to_string(),
                    converged: c,
                    total: self.n_trials,
                });
            }
        }
        Ok(())
    }

    /// A copy with every wall-clock field set to zero.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.mean_wall_time.values_mut().for_each(|t| *t = 0.0);
        for t in &mut r.trials {
            t.outcomes.iter_mut().for_each(|o| o.wall_time = 0.0);
        }
        r
    }
}

/// Runs `config.n_trials` trials on `workers` threads.
pub fn run_monte_carlo(config: &ExperimentConfig, workers: usize) -> Result<McReport> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<TrialResult>> = pool.install(|| {
        (0..config.n_trials)
            .into_par_iter()
            .map(|i| run_trial(config, config.trial_seed(i)))
            .collect()
    });
    let trials = results.into_iter().collect::<Result<Vec<_>>>()?;
    McReport::aggregate(config, trials)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Format(other.to_string())),
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Writes the report into `dir` and returns the files written.
///
/// `json` produces `report.json`. `csv` produces `energy_table.csv` (one row
/// per method plus the enhancement ratio, one column per subband),
/// `subbands.csv`, `spectrum_magnitude.csv` and `trials.csv`.
pub fn export_report(report: &McReport, dir: &Path, format: ExportFormat) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    match format {
        ExportFormat::Json => {
            let path = dir.join("report.json");
            write_json(&path, report)?;
            Ok(vec![path])
        }
        ExportFormat::Csv => {
            let methods: Vec<Method> = report.config.methods.clone();
            let table = dir.join("energy_table.csv");
            write_energy_table(&table, &report.mean_energies, report.eer_of_means.as_deref())?;

            let subbands = dir.join("subbands.csv");
            let mut header = vec!["subband".to_string(), "start_bin".into(), "end_bin".into(), "active".into(), "truth".into()];
            for m in &methods {
                header.extend([format!("{m}_mean"), format!("{m}_std"), format!("{m}_detected")]);
            }
            header.extend(["eer_of_means".into(), "mean_eer".into(), "mean_abs_eer".into()]);
            let rows = (0..report.active_mask.len()).map(|j| {
                let mut row = vec![
                    (j + 1).to_string(),
                    report.edges[j].to_string(),
                    report.edges[j + 1].to_string(),
                    report.active_mask[j].to_string(),
                    fmt_f64(report.true_mean_energies[j]),
                ];
                for m in &methods {
                    row.push(opt(report.mean_energies.get(m).map(|v| v[j])));
                    row.push(opt(report.std_energies.get(m).map(|v| v[j])));
                    row.push(report.mean_decisions.get(m).map(|v| v[j].to_string()).unwrap_or_default());
                }
                for e in [&report.eer_of_means, &report.mean_eer, &report.mean_abs_eer] {
                    row.push(opt(e.as_ref().and_then(|v| v[j])));
                }
                row
            });
            write_csv(&subbands, &header.iter().map(String::as_str).collect::<Vec<_>>(), rows)?;

            let spectrum = dir.join("spectrum_magnitude.csv");
            let mut header = vec!["bin".to_string(), "freq_hz".into(), "truth".into()];
            let plotted: Vec<&Method> = methods.iter().filter(|m| report.mean_magnitude.contains_key(m)).collect();
            header.extend(plotted.iter().map(|m| m.to_string()));
            let rows = (0..report.bin_freqs.len()).map(|b| {
                let mut row = vec![b.to_string(), fmt_f64(report.bin_freqs[b]), fmt_f64(report.true_mean_magnitude[b])];
                row.extend(plotted.iter().map(|m| fmt_f64(report.mean_magnitude[*m][b])));
                row
            });
            write_csv(&spectrum, &header.iter().map(String::as_str).collect::<Vec<_>>(), rows)?;

            let trials = dir.join("trials.csv");
            let header = [
                "seed", "method", "status", "iterations", "objective", "relative_error",
                "exact_detection", "wall_time", "input_hash",
            ];
            let rows = report.trials.iter().flat_map(|t| {
                t.outcomes.iter().map(move |o| {
                    vec![
                        t.seed.to_string(),
                        o.method.to_string(),
                        format!("{:?}", o.status).to_ascii_lowercase(),
                        o.iterations.to_string(),
                        fmt_f64(o.objective_value),
                        fmt_f64(o.relative_error),
                        t.report
                            .exact_detection(o.method)
                            .map(|d| d.to_string())
                            .unwrap_or_default(),
                        fmt_f64(o.wall_time),
                        o.input_hash.clone(),
                    ]
                })
            });
            write_csv(&trials, &header, rows)?;
            Ok(vec![table, subbands, spectrum, trials])
        }
    }
}

pub fn read_report(path: &Path) -> Result<McReport> {
    read_json(path)
}
