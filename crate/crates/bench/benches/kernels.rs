use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polyrank_bench::{dense_power, full_rank_family, mixed_cubic, random_grid};
use polyrank_core::expansion::{image_size, DEFAULT_BUDGET};
use polyrank_core::moment;
use polyrank_core::rank::{self, RankMethod};

fn multiplication(c: &mut Criterion) {
    let mut g = c.benchmark_group("poly_mul");
    for e in [4u32, 8] {
        let a = dense_power(4, e);
        let b = dense_power(4, e);
        g.bench_with_input(BenchmarkId::from_parameter(e), &(a, b), |bench, (a, b)| bench.iter(|| black_box(a * b)));
    }
    g.finish();
}

fn rank_methods(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank");
    for k in [4usize, 6] {
        let f = full_rank_family(k);
        g.bench_with_input(BenchmarkId::new("exact", k), &f, |bench, f| {
            bench.iter(|| rank::rank(black_box(f), RankMethod::Exact).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("randomized", k), &f, |bench, f| {
            bench.iter(|| rank::rank(black_box(f), RankMethod::default()).unwrap())
        });
    }
    let vol = moment::volume_poly(4).unwrap();
    g.bench_function("volume_d4", |bench| bench.iter(|| rank::rank_in(black_box(&vol), 4, RankMethod::Exact).unwrap()));
    g.finish();
}

fn images(c: &mut Criterion) {
    let mut g = c.benchmark_group("image_size");
    g.sample_size(10);
    let f = mixed_cubic();
    for n in [50usize, 100] {
        let sets = random_grid(3, n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &sets, |bench, sets| {
            bench.iter(|| image_size(black_box(&f), sets, DEFAULT_BUDGET).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, multiplication, rank_methods, images);
criterion_main!(benches);
