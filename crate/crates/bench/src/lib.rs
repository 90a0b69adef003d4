//! Fixed-seed inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thr_core::IntMatrix;

/// `count` random `n x n` matrices with entries in `-bound..=bound`.
pub fn random_matrices(count: usize, n: usize, bound: i64, seed: u64) -> Vec<IntMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
            IntMatrix::from_rows_with_cols(&rows, n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_reproducible() {
        assert_eq!(random_matrices(3, 4, 5, 7), random_matrices(3, 4, 5, 7));
        assert_ne!(random_matrices(1, 4, 5, 7), random_matrices(1, 4, 5, 8));
    }
}
