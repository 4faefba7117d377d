use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polypulse::infidelity::{assemble_zeta, default_oracle_points, improvement_r, zeta_oracle, Metric};
use polypulse_bench::{ground_bus, pulse, uniform_rates};

fn reconciled(c: &mut Criterion) {
    let rates = uniform_rates();
    let bus = ground_bus(2).moments();
    let mut group = c.benchmark_group("zeta_reconciled");
    for m in [2usize, 8] {
        let p = pulse(m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &p, |b, p| {
            b.iter(|| assemble_zeta(p, black_box(4), &rates, &bus))
        });
    }
    group.finish();
    c.bench_function("improvement_r_m5_n50", |b| {
        b.iter(|| improvement_r(black_box(5), 50, &rates, &bus, Metric::Frobenius))
    });
}

fn oracle(c: &mut Criterion) {
    let rates = uniform_rates();
    let bus = ground_bus(2);
    let mut group = c.benchmark_group("zeta_oracle");
    group.sample_size(10);
    for n in [2usize, 3] {
        let p = pulse(3);
        let points = default_oracle_points(&p);
        group.bench_with_input(BenchmarkId::new("m3", n), &n, |b, &n| {
            b.iter(|| zeta_oracle(&p, n, &rates, &bus, points))
        });
    }
    group.finish();
}

criterion_group!(benches, reconciled, oracle);
criterion_main!(benches);
