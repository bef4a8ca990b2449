use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use ogtt_core::inference::{sample_posterior, OgttPosterior};
use ogtt_core::model::{simulate, ModelParams, DEFAULT_STEP};
use ogtt_core::stability::characteristic_roots;
use ogtt_core::PriorSpec;

fn bench_simulate(c: &mut Criterion) {
    let p = ModelParams::from_vector(&[1.0, 10.0, 10.0, 90.0, 6.0]);
    c.bench_function("simulate_2h", |b| {
        b.iter(|| simulate(black_box(&p), 92.0, 2.0, DEFAULT_STEP).unwrap())
    });
}

fn bench_roots(c: &mut Criterion) {
    c.bench_function("characteristic_roots", |b| {
        b.iter(|| characteristic_roots(black_box(10.0), black_box(60.0 / 31.0)))
    });
}

fn bench_twalk(c: &mut Criterion) {
    let post = OgttPosterior::new(&[92.0, 165.0, 150.0, 120.0, 101.0], PriorSpec::default());
    let mut group = c.benchmark_group("twalk");
    group.sample_size(10);
    group.bench_function("ogtt_1000_steps", |b| {
        b.iter(|| sample_posterior(black_box(&post), 1000, 100, 42).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_simulate, bench_roots, bench_twalk);
criterion_main!(benches);
