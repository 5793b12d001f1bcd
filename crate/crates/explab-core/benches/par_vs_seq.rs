//! Parallel vs sequential throughput on representative workloads.
//!
//! Run with `cargo bench -p explab-core`; pass `--no-default-features` to see
//! the sequential-only build. The two paths are also compared side by side
//! within one process below.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use explab_core::cutoffs::ordering_violations;
use explab_core::par::{par_map_indexed, seq_map_indexed};
use explab_core::params::ModelParams;

fn grid_point(i: usize) -> ModelParams {
    // low-discrepancy-ish scatter over the open box, g > 0 by construction
    let u = |k: usize| ((i * k + 7) % 997) as f64 / 997.0;
    let lambda = 0.02 + 0.95 * u(3);
    let delta = 0.02 + 0.95 * u(5);
    let c = 0.2 + 2.0 * u(11);
    let m = c / lambda * (1.1 + u(13));
    let p0 = 0.05 + 0.9 * u(17);
    ModelParams::new(lambda, delta, c, m, p0).unwrap()
}

fn bench_ordering_sweep(crit: &mut Criterion) {
    let mut group = crit.benchmark_group("cutoff_ordering_sweep");
    for &n in &[256usize, 2048] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| par_map_indexed(n, |i| ordering_violations(&grid_point(i)).len()))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| seq_map_indexed(n, |i| ordering_violations(&grid_point(i)).len()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_ordering_sweep);
criterion_main!(benches);
