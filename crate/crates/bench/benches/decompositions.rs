use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dualsvd_bench::fixture;
use dualsvd_core::{compute_cdsvd, dmpgi, rank_k_approx};
use std::hint::black_box;

const SHAPES: [(usize, usize, usize); 3] = [(32, 24, 8), (128, 96, 20), (400, 200, 30)];

fn decompositions(c: &mut Criterion) {
    let mut group = c.benchmark_group("dual");
    group.sample_size(10);
    for (m, n, r) in SHAPES {
        let a = fixture(m, n, r, 1);
        let id = format!("{m}x{n}r{r}");
        group.bench_with_input(BenchmarkId::new("cdsvd", &id), &a, |b, a| b.iter(|| compute_cdsvd(black_box(a)).unwrap()));
        group.bench_with_input(BenchmarkId::new("rank_k", &id), &a, |b, a| {
            b.iter(|| rank_k_approx(black_box(a), r / 2).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dmpgi", &id), &a, |b, a| b.iter(|| dmpgi(black_box(a)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, decompositions);
criterion_main!(benches);
