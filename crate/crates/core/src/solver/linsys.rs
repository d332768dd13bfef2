//! The linear step of the ADMM iteration,
//!
//! ```text
//! (sigma I + A^T R A) x = sigma x_k - c + A^T w,     R = diag(rho)
//! ```
//!
//! factored once per `rho`. Rows with at most one nonzero only touch the
//! diagonal, so when the remaining ("heavy") rows are fewer than the
//! variables the system is inverted through the Woodbury identity around
//! that diagonal. Otherwise the full matrix is Cholesky-factored.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::SparseRow;

pub(super) struct LinearSystem {
    kind: Kind,
}

enum Kind {
    Direct {
        chol: Cholesky<f64, Dyn>,
    },
    Woodbury {
        /// Per row: `Some((col, val))` for a light row, `None` for heavy.
        light: Vec<Option<(usize, f64)>>,
        heavy_rows: Vec<usize>,
        heavy_rho: Vec<f64>,
        d_inv: DVector<f64>,
        h: DMatrix<f64>,
        /// `H D^{-1} H^T`.
        gram: DMatrix<f64>,
        /// Cholesky of `R_h^{-1} + gram`.
        cap: Cholesky<f64, Dyn>,
    },
}

impl LinearSystem {
    pub fn new(rows: &[SparseRow], n: usize, rho: &[f64], sigma: f64) -> Self {
        let heavy: Vec<usize> = (0..rows.len())
            .filter(|&i| rows[i].iter().filter(|(_, v)| *v != 0.0).count() > 1)
            .collect();
        let kind = if heavy.len() < n {
            Self::woodbury(rows, n, rho, sigma, heavy)
        } else {
            Self::direct(rows, n, rho, sigma)
        };
        Self { kind }
    }

    fn direct(rows: &[SparseRow], n: usize, rho: &[f64], sigma: f64) -> Kind {
        let mut k = DMatrix::<f64>::identity(n, n) * sigma;
        for (row, &r) in rows.iter().zip(rho) {
            for &(i, vi) in row {
                for &(j, vj) in row {
                    k[(i, j)] += r * vi * vj;
                }
            }
        }
        let chol = Cholesky::new(k).expect("sigma I + A^T R A is positive definite");
        Kind::Direct { chol }
    }

    fn woodbury(
        rows: &[SparseRow],
        n: usize,
        rho: &[f64],
        sigma: f64,
        heavy_rows: Vec<usize>,
    ) -> Kind {
        let mut diag = vec![sigma; n];
        let mut light = vec![None; rows.len()];
        let mut is_heavy = vec![false; rows.len()];
        for &i in &heavy_rows {
            is_heavy[i] = true;
        }
        for (i, row) in rows.iter().enumerate() {
            if is_heavy[i] {
                continue;
            }
            if let Some(&(j, v)) = row.iter().find(|(_, v)| *v != 0.0) {
                diag[j] += rho[i] * v * v;
                light[i] = Some((j, v));
            }
        }
        let d_inv = DVector::from_iterator(n, diag.iter().map(|d| 1.0 / d));

        let nh = heavy_rows.len();
        let mut h = DMatrix::<f64>::zeros(nh, n);
        for (r, &i) in heavy_rows.iter().enumerate() {
            for &(j, v) in &rows[i] {
                h[(r, j)] += v;
            }
        }
        let mut scaled = h.clone();
        for j in 0..n {
            let s = d_inv[j].sqrt();
            scaled.column_mut(j).scale_mut(s);
        }
        let gram = &scaled * scaled.transpose();
        let heavy_rho: Vec<f64> = heavy_rows.iter().map(|&i| rho[i]).collect();
        let mut cap = gram.clone();
        for (r, &p) in heavy_rho.iter().enumerate() {
            cap[(r, r)] += 1.0 / p;
        }
        let cap = Cholesky::new(cap).expect("capacitance matrix is positive definite");
        Kind::Woodbury {
            light,
            heavy_rows,
            heavy_rho,
            d_inv,
            h,
            gram,
            cap,
        }
    }

    /// Solves the linear step for right-hand side `sigma x - c + A^T w` and
    /// returns `(x_tilde, A x_tilde)`.
    pub fn step(
        &self,
        rows: &[SparseRow],
        sigma: f64,
        x: &[f64],
        c: &[f64],
        w: &[f64],
    ) -> (Vec<f64>, Vec<f64>) {
        let n = x.len();
        match &self.kind {
            Kind::Direct { chol } => {
                let mut rhs = DVector::from_iterator(n, x.iter().zip(c).map(|(x, c)| sigma * x - c));
                for (row, &wi) in rows.iter().zip(w) {
                    for &(j, v) in row {
                        rhs[j] += v * wi;
                    }
                }
                chol.solve_mut(&mut rhs);
                let xt: Vec<f64> = rhs.iter().copied().collect();
                let axt = rows
                    .iter()
                    .map(|row| row.iter().map(|&(j, v)| v * xt[j]).sum())
                    .collect();
                (xt, axt)
            }
            Kind::Woodbury {
                light,
                heavy_rows,
                heavy_rho,
                d_inv,
                h,
                gram,
                cap,
            } => {
                let mut r0 = DVector::from_iterator(n, x.iter().zip(c).map(|(x, c)| sigma * x - c));
                for (lr, &wi) in light.iter().zip(w) {
                    if let Some((j, v)) = lr {
                        r0[*j] += v * wi;
                    }
                }
                let wh = DVector::from_iterator(heavy_rows.len(), heavy_rows.iter().map(|&i| w[i]));
                let u = r0.component_mul(d_inv);
                // g = H D^{-1} r0 + G w_h, z = C^{-1} g
                let mut z = gram * &wh;
                z.gemv(1.0, h, &u, 1.0);
                cap.solve_mut(&mut z);
                // x = D^{-1} (r0 + H^T (w_h - z))
                let diff = &wh - &z;
                let mut corr = DVector::zeros(n);
                corr.gemv_tr(1.0, h, &diff, 0.0);
                let xt: Vec<f64> = (0..n).map(|j| u[j] + d_inv[j] * corr[j]).collect();

                let mut axt: Vec<f64> = light
                    .iter()
                    .map(|lr| lr.map_or(0.0, |(j, v)| v * xt[j]))
                    .collect();
                // H x_tilde collapses to R_h^{-1} z
                for (r, &i) in heavy_rows.iter().enumerate() {
                    axt[i] = z[r] / heavy_rho[r];
                }
                (xt, axt)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_reference(rows: &[SparseRow], n: usize, rho: &[f64], sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let mut k = DMatrix::<f64>::identity(n, n) * sigma;
        for (row, &r) in rows.iter().zip(rho) {
            for &(i, vi) in row {
                for &(j, vj) in row {
                    k[(i, j)] += r * vi * vj;
                }
            }
        }
        let b = DVector::from_column_slice(rhs);
        k.lu().solve(&b).unwrap().iter().copied().collect()
    }

    #[test]
    fn woodbury_and_direct_agree_with_dense_solve() {
        // 6 variables: 4 light rows and 2 heavy rows takes the Woodbury path,
        // adding 5 more heavy rows forces the direct path.
        let mut rows: Vec<SparseRow> = vec![
            vec![(0, -1.0)],
            vec![(3, 2.0)],
            vec![(5, -0.5)],
            vec![],
            vec![(0, 1.0), (1, 2.0), (4, -1.0)],
            vec![(2, 0.3), (3, -0.7), (5, 1.1)],
        ];
        let n = 6;
        for pass in 0..2 {
            if pass == 1 {
                for k in 0..5 {
                    rows.push(vec![(k, 1.0), (k + 1, -0.4 * k as f64 - 0.1)]);
                }
            }
            let m = rows.len();
            let rho: Vec<f64> = (0..m).map(|i| 0.1 + 0.05 * i as f64).collect();
            let sigma = 1e-3;
            let sys = LinearSystem::new(&rows, n, &rho, sigma);
            assert_eq!(matches!(sys.kind, Kind::Woodbury { .. }), pass == 0);
            let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
            let c: Vec<f64> = (0..n).map(|i| 0.3 * i as f64 - 1.0).collect();
            let w: Vec<f64> = (0..m).map(|i| (i as f64 * 0.7).cos()).collect();
            let (xt, axt) = sys.step(&rows, sigma, &x, &c, &w);

            let mut rhs: Vec<f64> = x.iter().zip(&c).map(|(x, c)| sigma * x - c).collect();
            for (row, wi) in rows.iter().zip(&w) {
                for &(j, v) in row {
                    rhs[j] += v * wi;
                }
            }
            let want = dense_reference(&rows, n, &rho, sigma, &rhs);
            for (a, b) in xt.iter().zip(&want) {
                assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()), "{a} vs {b}");
            }
            for (row, got) in rows.iter().zip(&axt) {
                let v: f64 = row.iter().map(|&(j, v)| v * want[j]).sum();
                assert!((v - got).abs() < 1e-8 * (1.0 + v.abs()), "{v} vs {got}");
            }
        }
    }
}
