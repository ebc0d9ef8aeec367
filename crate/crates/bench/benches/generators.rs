use std::hint::black_box;

use coinwalk_core::generators::{complete, expected_degree, gnp, MaxDegreeRule, WeightSequence};
use coinwalk_core::graph::degree_statistics;
use coinwalk_core::rng::stream;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_gnp(c: &mut Criterion) {
    let mut group = c.benchmark_group("gnp");
    group.sample_size(20);
    // Below the naive-scan limit, then two sizes on the skip sampler.
    for n in [10_000usize, 100_000, 1_000_000] {
        let p = 5.0 / n as f64;
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let mut rng = stream(1);
            b.iter(|| gnp(n, p, false, &mut rng).unwrap());
        });
    }
    group.finish();
}

fn bench_expected_degree(c: &mut Criterion) {
    let mut group = c.benchmark_group("expected_degree");
    group.sample_size(10);
    for n in [10_000usize, 100_000, 1_000_000] {
        let m = MaxDegreeRule::SqrtNd.resolve(n, 2.5, 5.0).unwrap();
        let w = WeightSequence::power_law(n, 2.5, 5.0, m).unwrap();
        group.bench_with_input(BenchmarkId::new("gamma_2.5", n), &w, |b, w| {
            let mut rng = stream(2);
            b.iter(|| expected_degree(w, true, &mut rng).unwrap());
        });
    }
    group.finish();
}

fn bench_analytics(c: &mut Criterion) {
    let k = complete(1000).unwrap();
    c.bench_function("degree_statistics/K_1000", |b| b.iter(|| degree_statistics(black_box(&k)).unwrap()));
    c.bench_function("complete/1000", |b| b.iter(|| complete(black_box(1000)).unwrap()));
}

criterion_group!(benches, bench_gnp, bench_expected_degree, bench_analytics);
criterion_main!(benches);
