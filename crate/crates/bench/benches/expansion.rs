use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lsdlab_bench::bench_rules;
use lsdlab_core::{compute_expansion, series_exp, series_log, series_pow, zeta_shifted_series};
use num_complex::Complex64;

fn coefficients(c: &mut Criterion) {
    let mut group = c.benchmark_group("compute_expansion");
    group.sample_size(10);
    for (name, rule) in bench_rules() {
        let alpha = match name {
            "tau_2" => Complex64::new(2.0, 0.0),
            "tau_half" => Complex64::new(0.5, 0.0),
            _ => Complex64::new(1.0, 0.0),
        };
        group.bench_with_input(BenchmarkId::new(name, "P=1e6"), &rule, |b, rule| {
            b.iter(|| compute_expansion(black_box(rule), alpha, 4, 1_000_000).unwrap())
        });
    }
    group.finish();
}

fn series_ops(c: &mut Criterion) {
    let z = zeta_shifted_series(10).unwrap();
    let alpha = Complex64::new(0.5, 0.25);
    c.bench_function("series_pow order 10", |b| {
        b.iter(|| series_pow(black_box(&z), alpha).unwrap())
    });
    c.bench_function("series exp(log) order 10", |b| {
        b.iter(|| series_exp(&series_log(black_box(&z)).unwrap()).unwrap())
    });
}

criterion_group!(benches, coefficients, series_ops);
criterion_main!(benches);
