use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polypulse::{solve_lambda, PulseSpec};
use polypulse_bench::pulse;

fn design(c: &mut Criterion) {
    let mut group = c.benchmark_group("design");
    for m in [2usize, 8, 32] {
        group.bench_with_input(BenchmarkId::new("solve_lambda", m), &m, |b, &m| {
            b.iter(|| solve_lambda(black_box(m)))
        });
        group.bench_with_input(BenchmarkId::new("optimal_pulse", m), &m, |b, &m| {
            b.iter(|| pulse(black_box(m)))
        });
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let p = pulse(8);
    c.bench_function("displacement_m8", |b| b.iter(|| p.displacement(black_box(1.234))));
    c.bench_function("accumulated_phase_m8", |b| b.iter(|| p.accumulated_phase(black_box(1.234))));
    c.bench_function("trajectory_m8_201", |b| b.iter(|| p.trajectory(black_box(201))));
    let text = p.to_json();
    c.bench_function("json_round_trip_m8", |b| b.iter(|| PulseSpec::from_json(black_box(&text))));
}

criterion_group!(benches, design, evaluation);
criterion_main!(benches);
