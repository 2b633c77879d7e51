//! Parallel vs. sequential timings for the two heavy kernels: the pairwise
//! (N·L2)² sum and the Δ1·Δ2 double-grid sweep. Build with the default
//! `parallel` feature so both paths are present.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use symham::l2::{l2sq_exact, l2sq_exact_seq};
use symham::oracles::{mixed_grid_sum, mixed_grid_sum_seq};
use symham::pointset::{symmetrized, Shift};

fn bench_pair_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("l2sq_symmetrized");
    group.sample_size(20);
    for m in [7u32, 9] {
        let shift = Shift::alternating(m).unwrap();
        let set = symmetrized(m, &shift).unwrap();
        group.bench_with_input(BenchmarkId::new("seq", m), &set, |b, set| {
            b.iter(|| l2sq_exact_seq(set).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("par", m), &set, |b, set| {
            b.iter(|| l2sq_exact(set).unwrap())
        });
    }
    group.finish();
}

fn bench_mixed_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("mixed_grid_sum");
    group.sample_size(20);
    for m in [6u32, 8] {
        let shift = Shift::alternating(m).unwrap();
        group.bench_with_input(BenchmarkId::new("seq", m), &shift, |b, shift| {
            b.iter(|| mixed_grid_sum_seq(m, shift).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("par", m), &shift, |b, shift| {
            b.iter(|| mixed_grid_sum(m, shift).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_pair_sum, bench_mixed_grid);
criterion_main!(benches);
