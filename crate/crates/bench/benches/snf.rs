use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use thr_bench::random_matrices;
use thr_core::fgab::snf;

fn bench_snf(c: &mut Criterion) {
    let mut group = c.benchmark_group("snf");
    for n in [4usize, 8, 16, 32] {
        let inputs = random_matrices(8, n, 9, n as u64);
        group.bench_with_input(BenchmarkId::from_parameter(n), &inputs, |b, ms| {
            b.iter(|| ms.iter().map(|m| snf(black_box(m)).rank).sum::<usize>())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_snf);
criterion_main!(benches);
