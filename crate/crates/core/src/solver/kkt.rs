//! Independent residual evaluation. Works block by block from the problem
//! statement (`F x + g in K`) instead of the solver's compiled standard form.

use serde::{Deserialize, Serialize};

use super::{ConicProblem, ConicSolution};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktResiduals {
    pub primal_res: f64,
    pub dual_res: f64,
    pub gap: f64,
}

pub fn kkt_check(problem: &ConicProblem, solution: &ConicSolution) -> Result<KktResiduals> {
    let m = problem.n_rows();
    if solution.x.len() != problem.n_vars || solution.slack.len() != m || solution.dual.len() != m {
        return Err(Error::dimension(format!(
            "solution sized ({}, {}, {}) for a problem with {} variables and {} rows",
            solution.x.len(),
            solution.slack.len(),
            solution.dual.len(),
            problem.n_vars,
            m
        )));
    }
    let x = &solution.x;

    let mut fx_sq = 0.0;
    let mut s_sq = 0.0;
    let mut g_sq = 0.0;
    let mut res_sq = 0.0;
    let mut cone_sq = 0.0;
    let mut dual_cone_sq = 0.0;
    let mut g_dot_l = 0.0;
    let mut ftl = vec![0.0; problem.n_vars];
    let mut offset = 0;
    for con in &problem.constraints {
        let d = con.dim();
        let s = &solution.slack[offset..offset + d];
        let l = &solution.dual[offset..offset + d];
        for (i, row) in con.rows.iter().enumerate() {
            let mut fx = 0.0;
            for &(j, v) in row {
                fx += v * x[j];
                ftl[j] += v * l[i];
            }
            let g = con.offset[i];
            fx_sq += fx * fx;
            s_sq += s[i] * s[i];
            g_sq += g * g;
            let r = fx + g - s[i];
            res_sq += r * r;
            g_dot_l += g * l[i];
        }
        cone_sq += con.cone.distance(s).powi(2);
        dual_cone_sq += con.cone.dual_distance(l).powi(2);
        offset += d;
    }

    let primal_res = res_sq.sqrt().max(cone_sq.sqrt())
        / (1.0 + fx_sq.sqrt().max(s_sq.sqrt()).max(g_sq.sqrt()));

    let mut rd_sq = 0.0;
    let mut ftl_sq = 0.0;
    let mut c_sq = 0.0;
    let mut c_dot_x = 0.0;
    for j in 0..problem.n_vars {
        let c = problem.objective[j];
        rd_sq += (c - ftl[j]).powi(2);
        ftl_sq += ftl[j] * ftl[j];
        c_sq += c * c;
        c_dot_x += c * x[j];
    }
    let dual_res = rd_sq.sqrt().max(dual_cone_sq.sqrt()) / (1.0 + ftl_sq.sqrt().max(c_sq.sqrt()));
    let gap = (c_dot_x + g_dot_l).abs() / (1.0 + c_dot_x.abs() + g_dot_l.abs());
    Ok(KktResiduals {
        primal_res,
        dual_res,
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{ConeConstraint, ConeKind, SolveStatus};

    /// min x0 + x1  s.t.  x0 = 1,  x1 >= 2
    fn lp() -> ConicProblem {
        ConicProblem::new(2)
            .minimize(vec![1.0, 1.0])
            .with(ConeConstraint::new(ConeKind::Zero, vec![vec![(0, 1.0)]], vec![-1.0]))
            .with(ConeConstraint::new(
                ConeKind::NonNegative,
                vec![vec![(1, 1.0)]],
                vec![-2.0],
            ))
    }

    fn exact() -> ConicSolution {
        ConicSolution {
            x: vec![1.0, 2.0],
            slack: vec![0.0, 0.0],
            dual: vec![1.0, 1.0],
            status: SolveStatus::Optimal,
            primal_residual: 0.0,
            dual_residual: 0.0,
            gap: 0.0,
            iterations: 0,
            log: Vec::new(),
        }
    }

    #[test]
    fn analytic_optimum_has_zero_residuals() {
        let r = kkt_check(&lp(), &exact()).unwrap();
        assert!(r.primal_res <= 1e-10 && r.dual_res <= 1e-10 && r.gap <= 1e-10, "{r:?}");
    }

    #[test]
    fn primal_residual_tracks_perturbation_size() {
        // ||F eps|| / (1 + max(...)) with F = I and max(...) = ||g|| = sqrt(5)
        for eps in [1e-6, 1e-4, 1e-2] {
            let mut sol = exact();
            sol.x[0] += eps;
            let r = kkt_check(&lp(), &sol).unwrap();
            let fx = (1.0f64 + eps).hypot(2.0);
            let expected = eps / (1.0 + fx.max(5f64.sqrt()));
            assert!((r.primal_res - expected).abs() < 1e-12, "{} vs {}", r.primal_res, expected);
        }
    }

    #[test]
    fn dual_cone_violation_is_measured() {
        let mut sol = exact();
        sol.dual[1] = -1.0;
        assert!(kkt_check(&lp(), &sol).unwrap().dual_res > 0.1);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let mut sol = exact();
        sol.x.push(0.0);
        assert!(matches!(kkt_check(&lp(), &sol), Err(Error::Dimension(_))));
    }
}
