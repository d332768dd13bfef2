use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ConeConstraint, ConeKind, SparseRow};

/// Real lifting of `n` complex unknowns `r_k`.
///
/// Variables are laid out as three contiguous blocks starting at `offset`:
/// real parts, imaginary parts, then modulus bounds `u_k`. The complex l1
/// norm becomes `sum_k u_k` under the cones `||(re_k, im_k)||_2 <= u_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexLifting {
    pub n_complex: usize,
    pub offset: usize,
}

impl ComplexLifting {
    pub fn new(n_complex: usize, offset: usize) -> Self {
        Self { n_complex, offset }
    }

    pub fn n_vars(&self) -> usize {
        3 * self.n_complex
    }

    pub fn re(&self, k: usize) -> usize {
        self.offset + k
    }

    pub fn im(&self, k: usize) -> usize {
        self.offset + self.n_complex + k
    }

    pub fn modulus(&self, k: usize) -> usize {
        self.offset + 2 * self.n_complex + k
    }

    pub fn complex_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n_complex).map(|k| (self.re(k), self.im(k))).collect()
    }

    /// One 3-dimensional cone `(u_k, re_k, im_k)` per unknown.
    pub fn modulus_cones(&self) -> Vec<ConeConstraint> {
        (0..self.n_complex)
            .map(|k| {
                ConeConstraint::new(
                    ConeKind::SecondOrder,
                    vec![
                        vec![(self.modulus(k), 1.0)],
                        vec![(self.re(k), 1.0)],
                        vec![(self.im(k), 1.0)],
                    ],
                    vec![0.0; 3],
                )
            })
            .collect()
    }

    /// `sum_k u_k` as a sparse row.
    pub fn l1_row(&self) -> SparseRow {
        (0..self.n_complex).map(|k| (self.modulus(k), 1.0)).collect()
    }

    /// Rows and offsets of `y - B r`, real parts first then imaginary parts.
    pub fn residual_rows(&self, b: &DMatrix<Complex64>, y: &[Complex64]) -> (Vec<SparseRow>, Vec<f64>) {
        assert_eq!(b.ncols(), self.n_complex, "matrix width must match the lifting");
        assert_eq!(b.nrows(), y.len(), "measurement length must match the matrix");
        let m = b.nrows();
        let mut rows = Vec::with_capacity(2 * m);
        let mut offsets = Vec::with_capacity(2 * m);
        for i in 0..m {
            // re(B r) = Re(B) re - Im(B) im
            let mut row = Vec::with_capacity(2 * self.n_complex);
            for k in 0..self.n_complex {
                row.push((self.re(k), -b[(i, k)].re));
            }
            for k in 0..self.n_complex {
                row.push((self.im(k), b[(i, k)].im));
            }
            rows.push(row);
            offsets.push(y[i].re);
        }
        for i in 0..m {
            // im(B r) = Im(B) re + Re(B) im
            let mut row = Vec::with_capacity(2 * self.n_complex);
            for k in 0..self.n_complex {
                row.push((self.re(k), -b[(i, k)].im));
            }
            for k in 0..self.n_complex {
                row.push((self.im(k), -b[(i, k)].re));
            }
            rows.push(row);
            offsets.push(y[i].im);
        }
        (rows, offsets)
    }

    pub fn unpack(&self, x: &[f64]) -> Vec<Complex64> {
        (0..self.n_complex)
            .map(|k| Complex64::new(x[self.re(k)], x[self.im(k)]))
            .collect()
    }

    /// Writes `r` and its moduli into `x`.
    pub fn pack(&self, r: &[Complex64], x: &mut [f64]) {
        for (k, z) in r.iter().enumerate() {
            x[self.re(k)] = z.re;
            x[self.im(k)] = z.im;
            x[self.modulus(k)] = z.norm();
        }
    }
}
