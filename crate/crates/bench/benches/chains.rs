use criterion::{criterion_group, criterion_main, Criterion};
use lumpchain::exactalg::char_poly;
use lumpchain::lumping::{dynkin_strong_check, FiberMap};
use lumpchain::sample::{simulate, walk_counts};
use lumpchain_bench::{chain, identity_perm, matrix, staircase};
use std::hint::black_box;

fn bench_matrix_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("matrix-build");
    g.sample_size(10);
    g.bench_function("b2r-std n=5", |b| b.iter(|| black_box(matrix("b2r-std", 5))));
    g.bench_function("tableau-downup n=6", |b| {
        b.iter(|| black_box(matrix("tableau-downup", 6)))
    });
    g.bench_function("partition-downup n=20", |b| {
        b.iter(|| black_box(matrix("partition-downup", 20)))
    });
    g.finish();
}

fn bench_char_poly(c: &mut Criterion) {
    let mut g = c.benchmark_group("char-poly");
    g.sample_size(10);
    let m = matrix("b2r-std", 5);
    g.bench_function("b2r-std n=5 (120x120)", |b| b.iter(|| black_box(char_poly(&m))));
    g.finish();
}

fn bench_lumping(c: &mut Criterion) {
    let mut g = c.benchmark_group("lumping");
    g.sample_size(10);
    let m = matrix("tableau-downup", 6);
    let map = FiberMap::named("sh", m.basis()).unwrap();
    g.bench_function("dynkin tableau-downup n=6 by sh", |b| {
        b.iter(|| black_box(dynkin_strong_check(&m, &map).unwrap()))
    });
    g.finish();
}

fn bench_simulate(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulate");
    g.sample_size(10);
    let id = chain("b2r-std", 8);
    let start = identity_perm(8);
    g.bench_function("b2r-std n=8, 10k one-step trials", |b| {
        b.iter(|| black_box(simulate(&id, &start, 1, 10_000, 17).unwrap()))
    });
    g.finish();
}

fn bench_hook_walk(c: &mut Criterion) {
    let mut g = c.benchmark_group("hook-walk");
    g.sample_size(10);
    let shape = staircase(8);
    g.bench_function("staircase(8), 10k removals", |b| {
        b.iter(|| black_box(walk_counts(&shape, true, 10_000, 5).unwrap()))
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_matrix_build,
    bench_char_poly,
    bench_lumping,
    bench_simulate,
    bench_hook_walk
);
criterion_main!(benches);
