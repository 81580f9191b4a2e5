use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use netchange::matching::min_cost_max_matching;

fn bench_matching(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_cost_max_matching");
    for size in [10usize, 50, 200] {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut left: Vec<i64> = (0..size).map(|_| rng.random_range(0..100_000)).collect();
        let mut right: Vec<i64> = (0..size).map(|_| rng.random_range(0..100_000)).collect();
        left.sort_unstable();
        right.sort_unstable();
        group.bench_with_input(
            BenchmarkId::from_parameter(size),
            &(left, right),
            |b, (l, r)| b.iter(|| min_cost_max_matching(black_box(l), black_box(r), 500)),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_matching);
criterion_main!(benches);
