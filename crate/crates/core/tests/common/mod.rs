#![allow(dead_code)]

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use widesense::measurement::{ideal_matrix, make_selection, mat_vec, CMatrix};
use widesense::Complex64;

/// Partial-DFT operator, an exactly `s`-sparse spectrum and its noiseless
/// samples.
pub struct SparseInstance {
    pub b: CMatrix,
    pub r0: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub support: Vec<usize>,
}

pub fn sparse_instance(n: usize, m: usize, s: usize, seed: u64) -> SparseInstance {
    let sel = make_selection(n, m, seed).unwrap();
    let b = ideal_matrix(&sel);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut support = sample(&mut rng, n, s).into_vec();
    support.sort_unstable();
    let mut r0 = vec![Complex64::new(0.0, 0.0); n];
    for &k in &support {
        let modulus = rng.random_range(0.5..1.5);
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        r0[k] = Complex64::from_polar(modulus, phase);
    }
    let y = mat_vec(&b, &r0).unwrap();
    SparseInstance { b, r0, y, support }
}

pub fn l1(r: &[Complex64]) -> f64 {
    r.iter().map(|z| z.norm()).sum()
}

pub fn l2(r: &[Complex64]) -> f64 {
    r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn rel_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let d: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    l2(&d) / l2(b)
}

pub fn random_cmatrix(rng: &mut impl Rng, rows: usize, cols: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
    })
}

pub fn random_cvec(rng: &mut impl Rng, n: usize, scale: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale)))
        .collect()
}

/// Minimum-cardinality exact representations of `y` over supports of size
/// at most `max_s`, by least squares on every support. Returns the minimal
/// size and every support attaining it.
pub fn l0_oracle(b: &CMatrix, y: &[Complex64], max_s: usize) -> (usize, Vec<Vec<usize>>) {
    let n = b.ncols();
    let y_vec = nalgebra::DVector::from_column_slice(y);
    let y_norm = y_vec.norm();
    for size in 1..=max_s {
        let mut hits = Vec::new();
        for support in combinations(n, size) {
            let sub = b.select_columns(&support);
            let svd = sub.clone().svd(true, true);
            let coef = svd.solve(&y_vec, 1e-12).unwrap();
            let resid = (&sub * coef - &y_vec).norm();
            if resid <= 1e-9 * y_norm {
                hits.push(support);
            }
        }
        if !hits.is_empty() {
            return (size, hits);
        }
    }
    (max_s + 1, Vec::new())
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Bins with `|r_k| > 1e-3 max |r|`.
pub fn support_of(r: &[Complex64]) -> Vec<usize> {
    let max = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (0..r.len()).filter(|&k| r[k].norm() > 1e-3 * max).collect()
}
