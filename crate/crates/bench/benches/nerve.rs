use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use thr_core::dihedral::{dihedral_nerve_piece, validate_structure};
use thr_core::homology::normalized_chains;
use thr_core::AffineMonoid;

fn bench_piece(c: &mut Criterion) {
    let n = AffineMonoid::natural();
    let mut group = c.benchmark_group("nerve_piece");
    for j in [2i64, 4, 6] {
        group.bench_with_input(BenchmarkId::new("build", j), &j, |b, &j| {
            b.iter(|| dihedral_nerve_piece(&n, &[vec![black_box(j)]], j as usize + 1).unwrap())
        });
        let x = dihedral_nerve_piece(&n, &[vec![j]], j as usize + 1).unwrap();
        group.bench_with_input(BenchmarkId::new("homology", j), &x, |b, x| {
            b.iter(|| normalized_chains(x).homology_table().unwrap())
        });
        group.bench_with_input(BenchmarkId::new("validate", j), &x, |b, x| b.iter(|| validate_structure(x).ok));
    }
    group.finish();
}

fn bench_fixed_points(c: &mut Criterion) {
    let x = dihedral_nerve_piece(&AffineMonoid::natural(), &[vec![4]], 3).unwrap();
    c.bench_function("sd_sigma_fixed_pi0", |b| b.iter(|| x.sd_sigma().unwrap().fixed_subset().unwrap().pi0().count));
}

criterion_group!(benches, bench_piece, bench_fixed_points);
criterion_main!(benches);
