//! Fixtures shared by the benchmarks.

use widesense::harness::ExperimentConfig;
use widesense::measurement::{acquire, ideal_matrix, make_selection, perturb, CMatrix};
use widesense::signal::{default_profile, spectrum_to_time, synthesize_spectrum};
use widesense::Complex64;

/// Default experiment scaled to an `n`-bin grid with `m = n / 2`.
pub fn config(n: usize) -> ExperimentConfig {
    let mut profile = default_profile();
    profile.grid_size = n;
    ExperimentConfig {
        profile,
        m: n / 2,
        n_trials: 1,
        ..ExperimentConfig::default()
    }
}

/// Observed operator and samples of one default capture on an `n`-bin grid.
pub fn capture(n: usize, seed: u64) -> (CMatrix, Vec<Complex64>, f64) {
    let cfg = config(n);
    let spectrum = synthesize_spectrum(&cfg.profile, seed).unwrap();
    let x = spectrum_to_time(&spectrum, cfg.profile.sample_rate());
    let sel = make_selection(n, cfg.m, seed).unwrap();
    let ms = perturb(&ideal_matrix(&sel), cfg.delta_elem(), seed).unwrap();
    let y = acquire(&x, &sel).unwrap();
    (ms.b, y, ms.delta_elem)
}
