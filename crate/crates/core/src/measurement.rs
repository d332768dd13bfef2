//! Compressive measurement operators.
//!
//! The ideal operator is `A = S F_N^{-1}`: the rows of the unitary inverse DFT
//! picked by a random [`SelectionMatrix`]. The receiver only knows the
//! distorted `B = A + V`, where `V` has bounded entries.

use std::f64::consts::TAU;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::io::{fmt_f64, write_csv};
use crate::rng::{stream, stream_rng};
use crate::signal::TimeSignal;

pub type CMatrix = DMatrix<Complex64>;

/// `M` distinct rows of the `N x N` identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionMatrix {
    n: usize,
    row_indices: Vec<usize>,
}

impl SelectionMatrix {
    pub fn new(n: usize, row_indices: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; n];
        for &i in &row_indices {
            if i >= n {
                return Err(Error::dimension(format!("row index {i} out of range for N = {n}")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::config(format!("row index {i} selected twice")));
            }
        }
        Ok(Self { n, row_indices })
    }

    /// The first `m` rows of the identity.
    pub fn prefix(n: usize, m: usize) -> Result<Self> {
        Self::new(n, (0..m).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.row_indices.len()
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.row_indices
    }

    /// The selected entries of `v`, in selection order.
    pub fn gather<T: Copy>(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.n {
            return Err(Error::dimension(format!(
                "vector of length {} for a selection over N = {}",
                v.len(),
                self.n
            )));
        }
        Ok(self.row_indices.iter().map(|&i| v[i]).collect())
    }

    /// Writes the indices as one integer per line.
    pub fn write_indices(&self, path: &Path) -> Result<()> {
        let mut text = String::with_capacity(self.m() * 5);
        for i in &self.row_indices {
            text.push_str(&i.to_string());
            text.push('\n');
        }
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Uniform sampling of `m` of the `n` rows without replacement.
pub fn make_selection(n: usize, m: usize, rng_seed: u64) -> Result<SelectionMatrix> {
    if m == 0 || m > n {
        return Err(Error::dimension(format!("need 1 <= M <= N, got M = {m}, N = {n}")));
    }
    let mut rng = stream_rng(rng_seed, stream::SELECTION);
    let rows = index::sample(&mut rng, n, m).into_vec();
    SelectionMatrix::new(n, rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DenseKind {
    /// i.i.d. real `N(0, 1/N)`.
    Gaussian,
    /// i.i.d. `+-1/sqrt(N)` with equal probability.
    Bernoulli,
}

impl FromStr for DenseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(Self::Gaussian),
            "bernoulli" => Ok(Self::Bernoulli),
            other => Err(Error::config(format!("unknown matrix kind `{other}`"))),
        }
    }
}

/// A random `M x N` sensing matrix with real entries.
pub fn make_dense_matrix(kind: DenseKind, n: usize, m: usize, rng_seed: u64) -> Result<CMatrix> {
    if n == 0 || m == 0 {
        return Err(Error::dimension("matrix dimensions must be positive"));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut rng = stream_rng(rng_seed, stream::DENSE_MATRIX);
    // column-major fill order, so the draw sequence is fixed by (kind, m, n, seed)
    Ok(CMatrix::from_fn(m, n, |_, _| {
        let v = match kind {
            DenseKind::Gaussian => {
                let z: f64 = StandardNormal.sample(&mut rng);
                z * scale
            }
            DenseKind::Bernoulli => {
                if rng.random::<bool>() {
                    scale
                } else {
                    -scale
                }
            }
        };
        Complex64::new(v, 0.0)
    }))
}

/// `A = S F_N^{-1}`, built densely from the inverse-DFT entries.
pub fn ideal_matrix(sel: &SelectionMatrix) -> CMatrix {
    let n = sel.n();
    CMatrix::from_fn(sel.m(), n, |i, k| fourier::inverse_entry(n, sel.row_indices[i], k))
}

/// `A r` through the FFT: the selected samples of `F_N^{-1} r`.
pub fn apply_ideal(sel: &SelectionMatrix, r: &[Complex64]) -> Result<Vec<Complex64>> {
    if r.len() != sel.n() {
        return Err(Error::dimension(format!(
            "spectrum of length {} for N = {}",
            r.len(),
            sel.n()
        )));
    }
    sel.gather(&fourier::inverse(r))
}

/// Plain dense matrix-vector product.
pub fn mat_vec(a: &CMatrix, v: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.ncols() != v.len() {
        return Err(Error::dimension(format!(
            "{}x{} matrix applied to a vector of length {}",
            a.nrows(),
            a.ncols(),
            v.len()
        )));
    }
    Ok((0..a.nrows())
        .map(|i| (0..a.ncols()).map(|k| a[(i, k)] * v[k]).sum())
        .collect())
}

/// Distribution of the entries of `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationModel {
    /// Modulus uniform on `[0, bound]`, phase uniform on `[0, 2 pi)`.
    #[default]
    UniformModulus,
    /// Circular complex Gaussian with per-component deviation `bound / 2`,
    /// redrawn until its modulus is within `bound`.
    TruncatedGaussian,
}

/// The ideal operator, its perturbation and the observed operator.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    pub a: CMatrix,
    pub v: CMatrix,
    pub b: CMatrix,
    /// Bound on `|V[m, k]|` used to draw `V`.
    pub delta_elem: f64,
    /// `||V||_inf` (maximum absolute row sum) as realized.
    pub delta_norm: f64,
}

impl MeasurementSet {
    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }
}

pub fn perturb(a: &CMatrix, delta_elem: f64, rng_seed: u64) -> Result<MeasurementSet> {
    perturb_with(a, delta_elem, PerturbationModel::UniformModulus, rng_seed)
}

pub fn perturb_with(
    a: &CMatrix,
    delta_elem: f64,
    model: PerturbationModel,
    rng_seed: u64,
) -> Result<MeasurementSet> {
    if !(delta_elem >= 0.0 && delta_elem.is_finite()) {
        return Err(Error::config(format!(
            "perturbation bound must be finite and non-negative, got {delta_elem}"
        )));
    }
    let (m, n) = a.shape();
    let v = if delta_elem == 0.0 {
        CMatrix::zeros(m, n)
    } else {
        let mut rng = stream_rng(rng_seed, stream::PERTURBATION);
        let gauss = Normal::new(0.0, delta_elem / 2.0).map_err(|e| Error::config(e.to_string()))?;
        CMatrix::from_fn(m, n, |_, _| match model {
            PerturbationModel::UniformModulus => {
                let modulus = rng.random::<f64>() * delta_elem;
                let phase = rng.random::<f64>() * TAU;
                Complex64::from_polar(modulus, phase)
            }
            PerturbationModel::TruncatedGaussian => loop {
                let z = Complex64::new(gauss.sample(&mut rng), gauss.sample(&mut rng));
                if z.norm() <= delta_elem {
                    break z;
                }
            },
        })
    };
    let b = a + &v;
    let delta_norm = matrix_linf_norm(&v);
    Ok(MeasurementSet {
        a: a.clone(),
        v,
        b,
        delta_elem,
        delta_norm,
    })
}

/// Induced l-infinity norm: the largest row sum of entry moduli.
pub fn matrix_linf_norm(v: &CMatrix) -> f64 {
    v.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Compressive samples `y = S x`: Nyquist-rate sampling followed by random
/// subselection.
pub fn acquire(x: &TimeSignal, sel: &SelectionMatrix) -> Result<Vec<Complex64>> {
    sel.gather(&x.x)
}

/// Lower estimate of the restricted isometry constant of order `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RipEstimate {
    pub s: usize,
    /// Largest `max(1 - sigma_min^2, sigma_max^2 - 1)` over probed supports.
    pub delta_s_lower: f64,
    pub n_probed: usize,
    /// False when supports were sampled rather than enumerated.
    pub exhaustive: bool,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn support_deviation(phi: &CMatrix, support: &[usize]) -> f64 {
    let sub = phi.select_columns(support);
    let sv = sub.singular_values();
    let max = sv.max();
    // a tall M x S submatrix has exactly S singular values
    let min = sv.min();
    (1.0 - min * min).max(max * max - 1.0)
}

/// Probes the RIP constant of `phi` over supports of size `s`: every support
/// when `C(N, s) <= max_supports`, otherwise `max_supports` random ones.
pub fn rip_probe(phi: &CMatrix, s: usize, max_supports: usize, rng_seed: u64) -> Result<RipEstimate> {
    let (m, n) = phi.shape();
    if s == 0 || s > m.min(n) {
        return Err(Error::dimension(format!(
            "sparsity {s} must be between 1 and min(M, N) = {}",
            m.min(n)
        )));
    }
    let total = binomial(n, s);
    let mut worst = 0.0f64;
    if total <= max_supports as u128 {
        let mut support: Vec<usize> = (0..s).collect();
        let mut probed = 0;
        loop {
            worst = worst.max(support_deviation(phi, &support));
            probed += 1;
            if !next_combination(&mut support, n) {
                break;
            }
        }
        Ok(RipEstimate {
            s,
            delta_s_lower: worst,
            n_probed: probed,
            exhaustive: true,
        })
    } else {
        let mut rng = stream_rng(rng_seed, stream::RIP);
        for _ in 0..max_supports {
            let mut support = index::sample(&mut rng, n, s).into_vec();
            support.sort_unstable();
            worst = worst.max(support_deviation(phi, &support));
        }
        Ok(RipEstimate {
            s,
            delta_s_lower: worst,
            n_probed: max_supports,
            exhaustive: false,
        })
    }
}

/// Advances a sorted `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Writes `row,col,re,im` for every entry.
pub fn write_matrix_csv(path: &Path, a: &CMatrix) -> Result<()> {
    let (m, n) = a.shape();
    let rows = (0..m).flat_map(|i| {
        (0..n).map(move |k| {
            let z = a[(i, k)];
            vec![i.to_string(), k.to_string(), fmt_f64(z.re), fmt_f64(z.im)]
        })
    });
    write_csv(path, &["row", "col", "re", "im"], rows)
}

impl fmt::Display for DenseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DenseKind::Gaussian => "gaussian",
            DenseKind::Bernoulli => "bernoulli",
        })
    }
}
