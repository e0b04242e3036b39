use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use parrondo_core::{
    canonical_example, grid_scan, mix, run_proper, run_superposed, simulate, stationary_solve,
    transition_matrix, Embedding, GridRange, MixWeight, QuantumCheck, SimConfig, SweepBase,
    SweepSpec,
};

fn protocols(c: &mut Criterion) {
    let (a, b) = canonical_example(0.005).unwrap();
    let e1 = Embedding::type1();
    let e2 = Embedding::type2();

    c.bench_function("run_proper", |bench| {
        bench.iter(|| run_proper(black_box(&b), &e1).unwrap())
    });
    c.bench_function("run_superposed", |bench| {
        bench.iter(|| run_superposed(black_box(&a), &b, 0.5, &e1, &e2).unwrap())
    });

    let t = transition_matrix(&mix(&a, &b, MixWeight::new(0.5).unwrap()).coins);
    c.bench_function("stationary_solve", |bench| {
        bench.iter(|| stationary_solve(black_box(&t)).unwrap())
    });
}

fn simulation(c: &mut Criterion) {
    let (_, b) = canonical_example(0.005).unwrap();
    let cfg = SimConfig::new(100_000, 42);
    c.bench_function("simulate_100k", |bench| {
        bench.iter(|| simulate(black_box(&b), &cfg).unwrap())
    });
}

fn sweep(c: &mut Criterion) {
    let spec = SweepSpec {
        eps: GridRange::new(0.001, 0.005, 20).unwrap(),
        r: GridRange::new(0.0, 1.0, 51).unwrap(),
        base: SweepBase::Canonical,
        quantum_check: Some(QuantumCheck::SecondQuantization),
    };
    c.bench_function("grid_scan_20x51", |bench| {
        bench.iter(|| grid_scan(black_box(&spec)).unwrap())
    });
}

criterion_group!(benches, protocols, simulation, sweep);
criterion_main!(benches);
