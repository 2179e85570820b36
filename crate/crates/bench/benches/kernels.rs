use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cpainleve_core::airy_ai;
use cpainleve_core::cpii::{solve_cpii, CpiiParams, DEFAULT_TOL, DEFAULT_X_MAX};
use cpainleve_core::op_engine::{compute_recurrence, JumpWeightSpec};
use cpainleve_core::rmt::{fredholm_estimate, mc_gap_probability};

fn airy(c: &mut Criterion) {
    let xs: Vec<f64> = (0..200).map(|i| -20.0 + 0.2 * i as f64).collect();
    c.bench_function("airy_ai/200 points on [-20, 20]", |b| {
        b.iter(|| xs.iter().map(|&x| airy_ai(black_box(x)).ai).sum::<f64>())
    });
}

fn recurrence(c: &mut Criterion) {
    let spec = JumpWeightSpec::new(0.3, 1.1, 0.4, 0.7).unwrap();
    let mut group = c.benchmark_group("compute_recurrence");
    group.sample_size(20);
    for n in [50, 200] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| compute_recurrence(black_box(&spec), n).unwrap())
        });
    }
    group.finish();
}

fn cpii(c: &mut Criterion) {
    let params = CpiiParams::new(0.4, 0.7, 1.0).unwrap();
    let mut group = c.benchmark_group("solve_cpii");
    group.sample_size(10);
    group.bench_function("coupled on [-8, 12]", |b| {
        b.iter(|| solve_cpii(black_box(&params), -8.0, DEFAULT_X_MAX, DEFAULT_TOL).unwrap())
    });
    group.finish();
}

fn fredholm(c: &mut Criterion) {
    let mut group = c.benchmark_group("fredholm_estimate");
    group.sample_size(10);
    for m in [30, 60] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| fredholm_estimate(black_box(-2.0), 0.0, 0.4, 0.7, m).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_gap_probability");
    group.sample_size(10);
    group.bench_function("n = 100, 10^4 samples", |b| {
        b.iter(|| mc_gap_probability(100, 13.0, 14.0, 10_000, black_box(1)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, airy, recurrence, cpii, fredholm, monte_carlo);
criterion_main!(benches);
