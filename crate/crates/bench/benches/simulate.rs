use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use polypulse::sim::{concurrence, propagate, QuantumState, SimConfig};
use polypulse_bench::{ground_bus, pulse, uniform_rates};

fn gate(c: &mut Criterion) {
    let p = pulse(2);
    let rates = uniform_rates();
    let config = SimConfig::for_pulse(2, &p).expect("valid config");
    let initial = QuantumState::basis_product(2, 0, &ground_bus(config.fock_cutoff)).expect("valid state");
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    group.bench_function("two_qubit_m2", |b| b.iter(|| propagate(black_box(&initial), &p, &rates, &config)));
    group.finish();

    let rho = propagate(&initial, &p, &rates, &config).expect("gate runs").final_qubit_state;
    c.bench_function("concurrence", |b| b.iter(|| concurrence(black_box(&rho))));
}

criterion_group!(benches, gate);
criterion_main!(benches);
