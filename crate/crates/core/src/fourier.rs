//! Unitary DFT pair, `F_N` and `F_N^{-1}`, both scaled by `1/sqrt(N)`.
//!
//! The FFT path backs everything in the pipeline; the `O(N^2)` dense versions
//! are the reference definition used by tests and by the dense matrix builders.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

fn transform(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = input.len();
    if n == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let mut buf = input.to_vec();
    fft.process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

/// Forward unitary DFT: `X[k] = N^{-1/2} sum_n x[n] e^{-2 pi i k n / N}`.
pub fn forward(x: &[Complex64]) -> Vec<Complex64> {
    transform(x, false)
}

/// Inverse unitary DFT: `x[n] = N^{-1/2} sum_k X[k] e^{+2 pi i k n / N}`.
pub fn inverse(spectrum: &[Complex64]) -> Vec<Complex64> {
    transform(spectrum, true)
}

/// Entry `(n, k)` of the unitary inverse DFT matrix.
pub fn inverse_entry(n_size: usize, row: usize, col: usize) -> Complex64 {
    // reduce the phase index first so large N keeps full precision
    let idx = (row * col) % n_size;
    let angle = 2.0 * PI * idx as f64 / n_size as f64;
    Complex64::from_polar(1.0 / (n_size as f64).sqrt(), angle)
}

/// Direct `O(N^2)` evaluation of the unitary DFT.
pub fn dense_dft(x: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(j, &v)| {
                    let e = inverse_entry(n, k, j);
                    v * if inverse { e } else { e.conj() }
                })
                .sum()
        })
        .collect()
}

pub fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn l1_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}
