//! A small conic solver for linear objectives over zero, nonnegative and
//! second-order cones.
//!
//! Problems are stated as
//!
//! ```text
//! minimize    c^T x
//! subject to  F_i x + g_i  in  K_i      for every constraint block i
//! ```
//!
//! and solved with an operator-splitting (ADMM) iteration on the standard
//! form `A x + s = b, s in K` with `A = -F`, `b = g`. Complex unknowns are
//! handled by [`ComplexLifting`], which splits each into a real/imaginary pair
//! and expresses moduli through 3-dimensional second-order cones.

mod admm;
mod cones;
mod kkt;
mod lift;
mod linsys;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use admm::solve;
pub use cones::ConeKind;
pub use kkt::{kkt_check, KktResiduals};
pub use lift::ComplexLifting;

/// Sparse row: `(column, value)` pairs.
pub type SparseRow = Vec<(usize, f64)>;

/// One block `F x + g in K`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeConstraint {
    pub rows: Vec<SparseRow>,
    pub offset: Vec<f64>,
    pub cone: ConeKind,
}

impl ConeConstraint {
    pub fn new(cone: ConeKind, rows: Vec<SparseRow>, offset: Vec<f64>) -> Self {
        Self { rows, offset, cone }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `F x + g` for this block.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(&self.offset)
            .map(|(row, g)| g + row.iter().map(|&(j, v)| v * x[j]).sum::<f64>())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConicProblem {
    pub n_vars: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<ConeConstraint>,
    /// `(re, im)` variable indices of lifted complex unknowns, in bin order.
    pub complex_pairs: Vec<(usize, usize)>,
}

impl ConicProblem {
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            objective: vec![0.0; n_vars],
            constraints: Vec::new(),
            complex_pairs: Vec::new(),
        }
    }

    pub fn minimize(mut self, objective: Vec<f64>) -> Self {
        self.objective = objective;
        self
    }

    pub fn with(mut self, constraint: ConeConstraint) -> Self {
        self.constraints.push(constraint);
        self
    }

    pub fn push(&mut self, constraint: ConeConstraint) {
        self.constraints.push(constraint);
    }

    pub fn n_rows(&self) -> usize {
        self.constraints.iter().map(ConeConstraint::dim).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.n_vars {
            return Err(Error::dimension(format!(
                "objective has {} entries for {} variables",
                self.objective.len(),
                self.n_vars
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.rows.len() != c.offset.len() {
                return Err(Error::dimension(format!(
                    "constraint {i}: {} rows but {} offsets",
                    c.rows.len(),
                    c.offset.len()
                )));
            }
            if c.rows.is_empty() {
                return Err(Error::dimension(format!("constraint {i} is empty")));
            }
            if c.rows.iter().flatten().any(|&(j, _)| j >= self.n_vars) {
                return Err(Error::dimension(format!(
                    "constraint {i} references a variable past {}",
                    self.n_vars
                )));
            }
            let finite = c.offset.iter().all(|v| v.is_finite())
                && c.rows.iter().flatten().all(|(_, v)| v.is_finite());
            if !finite {
                return Err(Error::config(format!("constraint {i} has non-finite data")));
            }
        }
        let mut seen = vec![false; self.n_vars];
        for &(re, im) in &self.complex_pairs {
            for j in [re, im] {
                if j >= self.n_vars || seen[j] {
                    return Err(Error::config(
                        "complex lifting must map each unknown to its own variable pair",
                    ));
                }
                seen[j] = true;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol_p: f64,
    pub tol_d: f64,
    pub tol_g: f64,
    pub max_iters: usize,
    /// Initial step parameter; adapted during the run when `adaptive_rho`.
    pub rho: f64,
    pub sigma: f64,
    /// Over-relaxation in `(0, 2)`.
    pub alpha: f64,
    pub adaptive_rho: bool,
    /// Residuals are evaluated every `check_every` iterations.
    pub check_every: usize,
    /// Keep an (iteration, residuals) trace in the solution.
    pub record_log: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_p: 1e-6,
            tol_d: 1e-6,
            tol_g: 1e-6,
            max_iters: 50_000,
            rho: 0.1,
            sigma: 1e-6,
            alpha: 1.6,
            adaptive_rho: true,
            check_every: 10,
            record_log: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    MaxIters,
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iteration: usize,
    pub primal_res: f64,
    pub dual_res: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConicSolution {
    pub x: Vec<f64>,
    /// Slack `F x + g`, projected onto the cones.
    pub slack: Vec<f64>,
    /// Multipliers in the dual cones.
    pub dual: Vec<f64>,
    pub status: SolveStatus,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub iterations: usize,
    pub log: Vec<IterationLog>,
}

impl ConicSolution {
    pub fn objective(&self, problem: &ConicProblem) -> f64 {
        problem
            .objective
            .iter()
            .zip(&self.x)
            .map(|(c, x)| c * x)
            .sum()
    }
}

/// Writes the iteration trace as `iteration,primal_res,dual_res,gap`.
pub fn write_iteration_log(path: &std::path::Path, log: &[IterationLog]) -> Result<()> {
    use crate::io::fmt_f64;
    crate::io::write_csv(
        path,
        &["iteration", "primal_res", "dual_res", "gap"],
        log.iter().map(|l| {
            vec![
                l.iteration.to_string(),
                fmt_f64(l.primal_res),
                fmt_f64(l.dual_res),
                fmt_f64(l.gap),
            ]
        }),
    )
}
