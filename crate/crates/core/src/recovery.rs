//! Sparse spectrum recovery from compressive samples `y` and the observed
//! operator `B`.
//!
//! * basis pursuit: `min ||r||_1  s.t.  B r = y`
//! * constrained LASSO: `min ||r||_1  s.t.  ||B r - y||_2 <= mu`
//! * distortion-aware epigraph program:
//!   `min t  s.t.  ||y - B r||_2 <= sqrt(M) delta t,  ||r||_1 <= t`
//!
//! The last one bounds the fitting error by what a perturbation with
//! `||V||_inf <= delta` can cause, `||V r||_2 <= sqrt(M) ||V||_inf ||r||_1`. Its
//! optimum equals `min_r max(||r||_1, ||y - B r||_2 / (sqrt(M) delta))`;
//! [`AsdTightness`] records which of the two terms is active at the returned
//! point.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{l1_norm, l2_norm};
use crate::io::{fmt_f64, write_csv, write_json};
use crate::measurement::{mat_vec, CMatrix};
use crate::solver::{
    kkt_check, solve, ComplexLifting, ConeConstraint, ConeKind, ConicProblem, ConicSolution,
    KktResiduals, SolveStatus, SolverOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bp,
    Lasso,
    Asd,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Bp, Method::Lasso, Method::Asd];

    pub fn name(self) -> &'static str {
        match self {
            Method::Bp => "bp",
            Method::Lasso => "lasso",
            Method::Asd => "asd",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bp" => Ok(Method::Bp),
            "lasso" => Ok(Method::Lasso),
            "asd" => Ok(Method::Asd),
            other => Err(Error::config(format!("unknown recovery method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub status: SolveStatus,
    pub iterations: usize,
    pub primal_res: f64,
    pub dual_res: f64,
    pub gap: f64,
    /// Residuals recomputed by [`kkt_check`].
    pub kkt: KktResiduals,
}

impl SolveDiagnostics {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Which side of the epigraph is active at the returned point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsdTightness {
    pub l1_tight: bool,
    pub residual_tight: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryResult {
    pub method: Method,
    pub r_hat: Vec<Complex64>,
    pub objective_value: f64,
    /// Epigraph variable of the distortion-aware program.
    pub epigraph_t: Option<f64>,
    pub tightness: Option<AsdTightness>,
    pub diagnostics: SolveDiagnostics,
    /// Seconds.
    pub wall_time: f64,
}

impl RecoveryResult {
    pub fn converged(&self) -> bool {
        self.diagnostics.converged()
    }
}

fn check_dims(b: &CMatrix, y: &[Complex64]) -> Result<()> {
    if b.nrows() != y.len() {
        return Err(Error::dimension(format!(
            "operator has {} rows but {} measurements",
            b.nrows(),
            y.len()
        )));
    }
    if b.nrows() > b.ncols() {
        return Err(Error::dimension(format!(
            "expected M <= N, got {}x{} operator",
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

/// `min sum u` over a lifting that starts at variable 0.
fn l1_problem(lift: &ComplexLifting, extra_vars: usize) -> ConicProblem {
    let mut p = ConicProblem::new(lift.n_vars() + extra_vars);
    for c in lift.modulus_cones() {
        p.push(c);
    }
    p.complex_pairs = lift.complex_pairs();
    p
}

pub fn bp_problem(b: &CMatrix, y: &[Complex64]) -> (ComplexLifting, ConicProblem) {
    let lift = ComplexLifting::new(b.ncols(), 0);
    let mut p = l1_problem(&lift, 0);
    let (rows, offsets) = lift.residual_rows(b, y);
    p.push(ConeConstraint::new(ConeKind::Zero, rows, offsets));
    for k in 0..lift.n_complex {
        p.objective[lift.modulus(k)] = 1.0;
    }
    (lift, p)
}

pub fn lasso_problem(b: &CMatrix, y: &[Complex64], mu: f64) -> (ComplexLifting, ConicProblem) {
    let lift = ComplexLifting::new(b.ncols(), 0);
    let mut p = l1_problem(&lift, 0);
    let (mut rows, mut offsets) = lift.residual_rows(b, y);
    rows.insert(0, Vec::new());
    offsets.insert(0, mu);
    p.push(ConeConstraint::new(ConeKind::SecondOrder, rows, offsets));
    for k in 0..lift.n_complex {
        p.objective[lift.modulus(k)] = 1.0;
    }
    (lift, p)
}

/// Epigraph form; the last variable is `t`.
pub fn asd_problem(b: &CMatrix, y: &[Complex64], delta: f64) -> (ComplexLifting, ConicProblem) {
    let lift = ComplexLifting::new(b.ncols(), 0);
    let t = lift.n_vars();
    let mut p = l1_problem(&lift, 1);
    let scale = (b.nrows() as f64).sqrt() * delta;
    let (mut rows, mut offsets) = lift.residual_rows(b, y);
    rows.insert(0, vec![(t, scale)]);
    offsets.insert(0, 0.0);
    p.push(ConeConstraint::new(ConeKind::SecondOrder, rows, offsets));
    let mut budget: Vec<(usize, f64)> = vec![(t, 1.0)];
    budget.extend(lift.l1_row().into_iter().map(|(j, v)| (j, -v)));
    p.push(ConeConstraint::new(ConeKind::NonNegative, vec![budget], vec![0.0]));
    p.objective[t] = 1.0;
    (lift, p)
}

fn finish(
    method: Method,
    lift: &ComplexLifting,
    problem: &ConicProblem,
    sol: &ConicSolution,
    started: Instant,
) -> Result<RecoveryResult> {
    let kkt = kkt_check(problem, sol)?;
    let r_hat = lift.unpack(&sol.x);
    Ok(RecoveryResult {
        method,
        objective_value: match method {
            Method::Asd => sol.objective(problem),
            _ => l1_norm(&r_hat),
        },
        r_hat,
        epigraph_t: None,
        tightness: None,
        diagnostics: SolveDiagnostics {
            status: sol.status,
            iterations: sol.iterations,
            primal_res: sol.primal_residual,
            dual_res: sol.dual_residual,
            gap: sol.gap,
            kkt,
        },
        wall_time: started.elapsed().as_secs_f64(),
    })
}

pub fn solve_bp(b: &CMatrix, y: &[Complex64], opts: &SolverOptions) -> Result<RecoveryResult> {
    check_dims(b, y)?;
    let started = Instant::now();
    let (lift, p) = bp_problem(b, y);
    let sol = solve(&p, opts)?;
    finish(Method::Bp, &lift, &p, &sol, started)
}

pub fn solve_lasso(
    b: &CMatrix,
    y: &[Complex64],
    mu: f64,
    opts: &SolverOptions,
) -> Result<RecoveryResult> {
    check_dims(b, y)?;
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::config(format!("mu must be finite and >= 0, got {mu}")));
    }
    let started = Instant::now();
    let (lift, p) = lasso_problem(b, y, mu);
    let sol = solve(&p, opts)?;
    finish(Method::Lasso, &lift, &p, &sol, started)
}

pub fn solve_asd(
    b: &CMatrix,
    y: &[Complex64],
    delta: f64,
    opts: &SolverOptions,
) -> Result<RecoveryResult> {
    check_dims(b, y)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::config(format!(
            "delta must be positive and finite, got {delta}; use basis pursuit for delta = 0"
        )));
    }
    let started = Instant::now();
    let (lift, p) = asd_problem(b, y, delta);
    let sol = solve(&p, opts)?;
    let mut result = finish(Method::Asd, &lift, &p, &sol, started)?;
    let t = sol.x[lift.n_vars()];
    let l1 = l1_norm(&result.r_hat);
    let res = residual_norm(b, y, &result.r_hat)?;
    let scaled = res / ((b.nrows() as f64).sqrt() * delta);
    let near = |v: f64| (t - v).abs() <= 1e-4 * t.abs().max(1e-12);
    result.epigraph_t = Some(t);
    result.tightness = Some(AsdTightness {
        l1_tight: near(l1),
        residual_tight: near(scaled),
    });
    result.wall_time = started.elapsed().as_secs_f64();
    Ok(result)
}

/// `||B r - y||_2` by direct summation.
pub fn residual_norm(b: &CMatrix, y: &[Complex64], r: &[Complex64]) -> Result<f64> {
    let br = mat_vec(b, r)?;
    Ok(br
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Per-method constraint data for [`certify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyParams {
    pub mu: f64,
    pub delta: f64,
    /// Relative tolerance; slacks may exceed zero by `rel_tol * scale + abs_tol`.
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for CertifyParams {
    fn default() -> Self {
        Self {
            mu: 0.0,
            delta: 0.0,
            rel_tol: 1e-5,
            abs_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub method: Method,
    pub residual_norm: f64,
    pub l1_norm: f64,
    /// Constraint value minus its bound; positive means violated.
    pub residual_slack: f64,
    /// `||r||_1 - t` for the epigraph program.
    pub l1_slack: Option<f64>,
    pub violations: Vec<String>,
}

impl Certificate {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Rechecks a result's constraints from `B`, `y` and `r_hat` alone.
pub fn certify(
    result: &RecoveryResult,
    b: &CMatrix,
    y: &[Complex64],
    params: &CertifyParams,
) -> Result<Certificate> {
    check_dims(b, y)?;
    let residual = residual_norm(b, y, &result.r_hat)?;
    let l1 = l1_norm(&result.r_hat);
    let y_norm = l2_norm(y);
    let mut violations = Vec::new();
    let (residual_slack, l1_slack) = match result.method {
        Method::Bp => {
            let slack = residual;
            if slack > params.rel_tol * y_norm + params.abs_tol {
                violations.push(format!("equality residual {residual:e} exceeds tolerance"));
            }
            (slack, None)
        }
        Method::Lasso => {
            let slack = residual - params.mu;
            if slack > params.rel_tol * y_norm + params.abs_tol {
                violations.push(format!(
                    "residual {residual:e} exceeds mu = {:e}",
                    params.mu
                ));
            }
            (slack, None)
        }
        Method::Asd => {
            let t = result
                .epigraph_t
                .ok_or_else(|| Error::config("epigraph result without t"))?;
            let bound = (b.nrows() as f64).sqrt() * params.delta * t;
            let slack = residual - bound;
            let tol = params.rel_tol * (1.0 + y_norm) + params.abs_tol;
            if slack > tol {
                violations.push(format!("residual {residual:e} exceeds sqrt(M) delta t = {bound:e}"));
            }
            let l1_slack = l1 - t;
            if l1_slack > tol {
                violations.push(format!("||r||_1 = {l1:e} exceeds t = {t:e}"));
            }
            (slack, Some(l1_slack))
        }
    };
    Ok(Certificate {
        method: result.method,
        residual_norm: residual,
        l1_norm: l1,
        residual_slack,
        l1_slack,
        violations,
    })
}

/// Writes `bin,re,im,magnitude` plus a JSON diagnostics sidecar.
pub fn export_result(result: &RecoveryResult, csv_path: &Path, json_path: &Path) -> Result<()> {
    write_spectrum_csv(csv_path, &result.r_hat)?;
    write_json(json_path, &result.sidecar())
}

pub fn write_spectrum_csv(path: &Path, r: &[Complex64]) -> Result<()> {
    write_csv(
        path,
        &["bin", "re", "im", "magnitude"],
        r.iter()
            .enumerate()
            .map(|(k, z)| vec![k.to_string(), fmt_f64(z.re), fmt_f64(z.im), fmt_f64(z.norm())]),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSidecar {
    pub method: Method,
    pub objective: f64,
    pub t: Option<f64>,
    pub tightness: Option<AsdTightness>,
    pub status: SolveStatus,
    pub iterations: usize,
    pub primal_res: f64,
    pub dual_res: f64,
    pub gap: f64,
    pub wall_time: f64,
}

impl RecoveryResult {
    pub fn sidecar(&self) -> DiagnosticsSidecar {
        DiagnosticsSidecar {
            method: self.method,
            objective: self.objective_value,
            t: self.epigraph_t,
            tightness: self.tightness,
            status: self.diagnostics.status,
            iterations: self.diagnostics.iterations,
            primal_res: self.diagnostics.primal_res,
            dual_res: self.diagnostics.dual_res,
            gap: self.diagnostics.gap,
            wall_time: self.wall_time,
        }
    }
}
