use std::ops::Range;

use super::cones::ConeKind;
use super::linsys::LinearSystem;
use super::{ConicProblem, ConicSolution, IterationLog, SolveStatus, SolverOptions, SparseRow};
use crate::error::{Error, Result};

const RHO_MIN: f64 = 1e-6;
const RHO_MAX: f64 = 1e6;
const EQ_RHO_SCALE: f64 = 1e3;
const ADAPT_EVERY: usize = 50;
const ADAPT_RATIO: f64 = 5.0;
const INFEAS_TOL: f64 = 1e-6;

/// Problem in standard form `A x + s = b, s in K`.
struct Standard {
    n: usize,
    rows: Vec<SparseRow>,
    b: Vec<f64>,
    c: Vec<f64>,
    blocks: Vec<(ConeKind, Range<usize>)>,
}

impl Standard {
    fn from_problem(p: &ConicProblem) -> Self {
        let mut rows = Vec::with_capacity(p.n_rows());
        let mut b = Vec::with_capacity(p.n_rows());
        let mut blocks = Vec::with_capacity(p.constraints.len());
        for con in &p.constraints {
            let start = rows.len();
            for (row, &g) in con.rows.iter().zip(&con.offset) {
                rows.push(row.iter().map(|&(j, v)| (j, -v)).collect());
                b.push(g);
            }
            blocks.push((con.cone, start..rows.len()));
        }
        Self {
            n: p.n_vars,
            rows,
            b,
            c: p.objective.clone(),
            blocks,
        }
    }

    fn mul(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    fn mul_t(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (row, &yi) in self.rows.iter().zip(y) {
            for &(j, v) in row {
                out[j] += v * yi;
            }
        }
        out
    }

    fn project(&self, v: &mut [f64]) {
        for (cone, range) in &self.blocks {
            cone.project(&mut v[range.clone()]);
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Relative residuals of an unscaled iterate; `lambda` is the dual-cone
/// multiplier (`c = F^T lambda = -A^T lambda` at optimality).
struct Residuals {
    primal: f64,
    dual: f64,
    gap: f64,
}

fn residuals(p: &Standard, x: &[f64], s: &[f64], lambda: &[f64]) -> Residuals {
    let ax = p.mul(x);
    let r_p: Vec<f64> = ax.iter().zip(s).zip(&p.b).map(|((a, s), b)| a + s - b).collect();
    let mut cone_viol = 0.0f64;
    let mut dual_viol = 0.0f64;
    for (cone, range) in &p.blocks {
        cone_viol = cone_viol.hypot(cone.distance(&s[range.clone()]));
        dual_viol = dual_viol.hypot(cone.dual_distance(&lambda[range.clone()]));
    }
    let primal = norm2(&r_p).max(cone_viol) / (1.0 + norm2(&ax).max(norm2(s)).max(norm2(&p.b)));

    let atl = p.mul_t(lambda);
    let r_d: Vec<f64> = p.c.iter().zip(&atl).map(|(c, a)| c + a).collect();
    let dual = norm2(&r_d).max(dual_viol) / (1.0 + norm2(&atl).max(norm2(&p.c)));

    let pobj = dot(&p.c, x);
    let dobj = -dot(&p.b, lambda);
    let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
    Residuals { primal, dual, gap }
}

/// Solves `problem` with a relaxed ADMM iteration.
///
/// The returned residuals are relative:
///
/// ```text
/// primal = max(||F x + g - s||, dist(s, K))    / (1 + max(||F x||, ||s||, ||g||))
/// dual   = max(||c - F^T l||, dist(l, K*))     / (1 + max(||F^T l||, ||c||))
/// gap    = |c^T x + g^T l|                     / (1 + |c^T x| + |g^T l|)
/// ```
///
/// Identical problem and options always produce the identical iterate sequence.
pub fn solve(problem: &ConicProblem, opts: &SolverOptions) -> Result<ConicSolution> {
    problem.validate()?;
    if !(opts.alpha > 0.0 && opts.alpha < 2.0) || opts.rho <= 0.0 || opts.sigma <= 0.0 {
        return Err(Error::config("solver needs rho > 0, sigma > 0 and alpha in (0, 2)"));
    }
    let check_every = opts.check_every.max(1);
    let raw = Standard::from_problem(problem);
    let n = raw.n;
    let m = raw.rows.len();

    // Normalizing b and c leaves the cones and the argmin unchanged.
    let b_scale = match norm_inf(&raw.b) {
        v if v > 0.0 => v,
        _ => 1.0,
    };
    let c_scale = match norm_inf(&raw.c) {
        v if v > 0.0 => v,
        _ => 1.0,
    };
    let b: Vec<f64> = raw.b.iter().map(|v| v / b_scale).collect();
    let c: Vec<f64> = raw.c.iter().map(|v| v / c_scale).collect();

    let mut eq_row = vec![false; m];
    for (cone, range) in &raw.blocks {
        if *cone == ConeKind::Zero {
            eq_row[range.clone()].iter_mut().for_each(|e| *e = true);
        }
    }
    let mut rho_base = opts.rho;
    let rho_vec = |base: f64| -> Vec<f64> {
        eq_row
            .iter()
            .map(|&eq| if eq { base * EQ_RHO_SCALE } else { base })
            .collect()
    };
    let mut rho = rho_vec(rho_base);
    let mut sys = LinearSystem::new(&raw.rows, n, &rho, opts.sigma);

    let mut x = vec![0.0; n];
    let mut s = vec![0.0; m];
    let mut y = vec![0.0; m];
    let mut dy = vec![0.0; m];
    let mut log = Vec::new();
    let mut status = SolveStatus::MaxIters;
    let mut last = Residuals {
        primal: f64::INFINITY,
        dual: f64::INFINITY,
        gap: f64::INFINITY,
    };
    let mut iterations = 0;

    let unscale = |x: &[f64], s: &[f64], y: &[f64]| {
        let xu: Vec<f64> = x.iter().map(|v| v * b_scale).collect();
        let su: Vec<f64> = s.iter().map(|v| v * b_scale).collect();
        let lu: Vec<f64> = y.iter().map(|v| -v * c_scale).collect();
        (xu, su, lu)
    };

    for k in 1..=opts.max_iters {
        iterations = k;
        let w: Vec<f64> = (0..m).map(|i| rho[i] * (b[i] - s[i]) + y[i]).collect();
        let (xt, axt) = sys.step(&raw.rows, opts.sigma, &x, &c, &w);
        let a = opts.alpha;
        for j in 0..n {
            x[j] = a * xt[j] + (1.0 - a) * x[j];
        }
        let s_hat: Vec<f64> = (0..m).map(|i| a * (b[i] - axt[i]) + (1.0 - a) * s[i]).collect();
        let mut s_new: Vec<f64> = (0..m).map(|i| s_hat[i] + y[i] / rho[i]).collect();
        raw.project(&mut s_new);
        for i in 0..m {
            let y_new = y[i] + rho[i] * (s_hat[i] - s_new[i]);
            dy[i] = y_new - y[i];
            y[i] = y_new;
        }
        s = s_new;

        if k % check_every != 0 && k != opts.max_iters {
            continue;
        }
        let (xu, su, lu) = unscale(&x, &s, &y);
        last = residuals(&raw, &xu, &su, &lu);
        if opts.record_log {
            log.push(IterationLog {
                iteration: k,
                primal_res: last.primal,
                dual_res: last.dual,
                gap: last.gap,
            });
        }
        if last.primal <= opts.tol_p && last.dual <= opts.tol_d && last.gap <= opts.tol_g {
            status = SolveStatus::Optimal;
            break;
        }
        if primal_infeasible(&raw, &b, &dy) {
            status = SolveStatus::Infeasible;
            break;
        }

        if opts.adaptive_rho && k % ADAPT_EVERY == 0 {
            let ax = raw.mul(&x);
            let aty = raw.mul_t(&y);
            let rp: Vec<f64> = (0..m).map(|i| ax[i] + s[i] - b[i]).collect();
            let rd: Vec<f64> = (0..n).map(|j| c[j] - aty[j]).collect();
            let p_rel = norm_inf(&rp) / norm_inf(&ax).max(norm_inf(&s)).max(norm_inf(&b)).max(1e-12);
            let d_rel = norm_inf(&rd) / norm_inf(&aty).max(norm_inf(&c)).max(1e-12);
            if p_rel > 0.0 && d_rel > 0.0 {
                let ratio = (p_rel / d_rel).sqrt();
                if !(1.0 / ADAPT_RATIO..=ADAPT_RATIO).contains(&ratio) {
                    rho_base = (rho_base * ratio).clamp(RHO_MIN, RHO_MAX);
                    rho = rho_vec(rho_base);
                    sys = LinearSystem::new(&raw.rows, n, &rho, opts.sigma);
                }
            }
        }
    }

    let (xu, su, lu) = unscale(&x, &s, &y);
    Ok(ConicSolution {
        x: xu,
        slack: su,
        dual: lu,
        status,
        primal_residual: last.primal,
        dual_residual: last.dual,
        gap: last.gap,
        iterations,
        log,
    })
}

/// `dy` is the last multiplier increment in the polar cone; normalized, its
/// negation certifies infeasibility when `A^T l = 0` and `b^T l < 0`.
fn primal_infeasible(p: &Standard, b: &[f64], dy: &[f64]) -> bool {
    let scale = norm2(dy);
    if scale < 1e-12 {
        return false;
    }
    let lambda: Vec<f64> = dy.iter().map(|v| -v / scale).collect();
    if dot(b, &lambda) > -INFEAS_TOL {
        return false;
    }
    let mut viol = 0.0f64;
    for (cone, range) in &p.blocks {
        viol = viol.hypot(cone.dual_distance(&lambda[range.clone()]));
    }
    viol <= INFEAS_TOL && norm_inf(&p.mul_t(&lambda)) <= INFEAS_TOL
}
