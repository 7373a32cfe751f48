use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pinned_walkers::sim::{estimate_variance, InitialShape, Parallelism};
use pinned_walkers::WalkParams;

fn replicas(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate_variance");
    group.sample_size(10);
    for (k, h) in [(4, 0), (32, 0)] {
        let params = WalkParams::new(k, h).unwrap();
        for (label, parallelism) in [("sequential", Parallelism::Sequential), ("parallel", Parallelism::available())] {
            group.bench_with_input(BenchmarkId::new(label, format!("K={k}")), &params, |b, &params| {
                b.iter(|| {
                    estimate_variance(black_box(params), 1_000, 256, 1, parallelism, InitialShape::DownThenUp).unwrap()
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, replicas);
criterion_main!(benches);
