use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use widesense::fourier::{forward, l2_norm};
use widesense::harness::run_trial;
use widesense::measurement::{ideal_matrix, make_selection, matrix_linf_norm};
use widesense::recovery::{solve_asd, solve_bp, solve_lasso};
use widesense::solver::SolverOptions;
use widesense::Complex64;
use widesense_bench::{capture, config};

fn transforms(c: &mut Criterion) {
    let mut g = c.benchmark_group("fft");
    for n in [512usize, 4096] {
        let x: Vec<Complex64> = (0..n).map(|k| Complex64::new(k as f64, -(k as f64))).collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &x, |b, x| b.iter(|| forward(black_box(x))));
    }
    g.finish();
}

fn operators(c: &mut Criterion) {
    let sel = make_selection(512, 256, 1).unwrap();
    c.bench_function("ideal_matrix 256x512", |b| b.iter(|| ideal_matrix(black_box(&sel))));
    let a = ideal_matrix(&sel);
    c.bench_function("linf_norm 256x512", |b| b.iter(|| matrix_linf_norm(black_box(&a))));
}

fn solvers(c: &mut Criterion) {
    let opts = SolverOptions::default();
    let mut g = c.benchmark_group("recovery");
    g.sample_size(10);
    for n in [64usize, 128] {
        let (b, y, delta) = capture(n, 3);
        let mu = 0.1 * l2_norm(&y);
        g.bench_function(BenchmarkId::new("bp", n), |bn| bn.iter(|| solve_bp(&b, &y, &opts).unwrap()));
        g.bench_function(BenchmarkId::new("lasso", n), |bn| {
            bn.iter(|| solve_lasso(&b, &y, mu, &opts).unwrap())
        });
        g.bench_function(BenchmarkId::new("asd", n), |bn| {
            bn.iter(|| solve_asd(&b, &y, delta, &opts).unwrap())
        });
    }
    g.finish();
}

fn trials(c: &mut Criterion) {
    let mut g = c.benchmark_group("trial");
    g.sample_size(10);
    let cfg = config(128);
    g.bench_function("lasso+asd n=128", |b| b.iter(|| run_trial(&cfg, 5).unwrap()));
    g.finish();
}

criterion_group!(benches, transforms, operators, solvers, trials);
criterion_main!(benches);
