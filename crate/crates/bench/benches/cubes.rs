use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use thr_core::cubes::{default_spot_weight, p1_report, pn_report, psigma_report, ProjectiveCones};

fn bench_projective(c: &mut Criterion) {
    let mut group = c.benchmark_group("projective");
    group.sample_size(10);
    group.bench_function("line", |b| b.iter(|| p1_report(3).unwrap().ok));
    group.bench_function("sigma", |b| b.iter(|| psigma_report().unwrap().stacked_rank));
    for n in [2usize, 3] {
        group.bench_with_input(BenchmarkId::new("space", n), &n, |b, &n| {
            b.iter(|| pn_report(n, 2, &[default_spot_weight(n)]).unwrap().ok)
        });
    }
    group.finish();
}

fn bench_weight_zero(c: &mut Criterion) {
    let mut group = c.benchmark_group("weight_zero_cube");
    for n in [2usize, 3, 4] {
        let p = ProjectiveCones { n };
        group.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| p.weight_zero_cube(true).unwrap().dim())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_projective, bench_weight_zero);
criterion_main!(benches);
