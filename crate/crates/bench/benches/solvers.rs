use std::hint::black_box;

use conestab::flow::{run_flow, Tier};
use conestab::{heat_decay_check, reproduce_table, tangential_verdict};
use conestab_bench::{flow_config, radial_pencil, sphere, MESH_SIZES};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn eigenvalues(c: &mut Criterion) {
    let mut group = c.benchmark_group("radial_first_eigenvalue");
    for m in MESH_SIZES {
        let pencil = radial_pencil(1.0, m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &pencil, |b, p| {
            b.iter(|| p.eigenvalue(black_box(0)).unwrap())
        });
    }
    group.finish();

    let pencil = radial_pencil(0.0, 4000);
    c.bench_function("radial_eigenpairs_k8_weighted", |b| {
        b.iter(|| pencil.smallest_eigenpairs(black_box(8)).unwrap())
    });
}

fn heat(c: &mut Criterion) {
    let pencil = radial_pencil(1.0, 2000);
    c.bench_function("heat_decay_check_m2000", |b| {
        b.iter(|| heat_decay_check(&pencil, 0, black_box(&[0.1, 0.5])).unwrap())
    });
}

fn classification(c: &mut Criterion) {
    let s = sphere(6);
    c.bench_function("tangential_verdict_s6", |b| {
        b.iter(|| tangential_verdict(black_box(&s)).unwrap())
    });
    c.bench_function("reproduce_table2_samples3", |b| {
        b.iter(|| reproduce_table(black_box(2), 3).unwrap())
    });
}

fn flow(c: &mut Criterion) {
    let mut group = c.benchmark_group("restart_flow");
    group.sample_size(10);
    for tier in [Tier::A, Tier::B] {
        let config = flow_config(tier);
        group.bench_with_input(BenchmarkId::from_parameter(tier), &config, |b, cfg| {
            b.iter(|| run_flow(cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, eigenvalues, heat, classification, flow);
criterion_main!(benches);
