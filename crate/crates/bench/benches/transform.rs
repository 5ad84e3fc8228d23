use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nn2poly_bench::{repeated_multiset, tanh_model};
use nn2poly_core::transform::nn2poly_with_cache;
use nn2poly_core::{build_cache, enumerate_partitions, Mode, PartitionCache, TransformConfig};
use std::hint::black_box;

fn partitions(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_partitions");
    for (distinct, repeat) in [(4, 1), (6, 1), (3, 2), (2, 4)] {
        let multiset = repeated_multiset(distinct, repeat);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{distinct}x{repeat}")),
            &multiset,
            |b, m| b.iter(|| enumerate_partitions(black_box(m)).len()),
        );
    }
    group.finish();
}

fn cache(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_cache");
    for q in [3u32, 4, 5, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(q), &q, |b, &q| {
            b.iter(|| build_cache(black_box(10), q).unwrap().len())
        });
    }
    group.finish();
}

fn transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("nn2poly");
    group.sample_size(10);
    let cache = PartitionCache::build(4).unwrap();
    for (p, q_max) in [(3usize, 3u32), (5, 3), (5, 4)] {
        let model = tanh_model(p, 3, 50, 1);
        let config = TransformConfig {
            taylor_orders: vec![8],
            q_max,
            mode: Mode::Regression,
        };
        group.bench_function(BenchmarkId::from_parameter(format!("p{p}_q{q_max}")), |b| {
            b.iter(|| nn2poly_with_cache(&model, &config, &cache).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, partitions, cache, transform);
criterion_main!(benches);
