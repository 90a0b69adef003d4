use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A sublattice of `Z^dim`, kept as a row-style Hermite basis.
///
/// Rows are in echelon form with positive pivots and entries above each pivot
/// reduced into `[0, pivot)`, so membership is decided by straight reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_generators<I>(dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = Vec<BigInt>>,
    {
        let mut rows: Vec<Vec<BigInt>> = gens
            .into_iter()
            .inspect(|g| assert_eq!(g.len(), dim, "lattice generator dimension mismatch"))
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .collect();
        let mut basis = Vec::new();
        let mut pivots = Vec::new();
        let mut col = 0;
        while col < dim && !rows.is_empty() {
            // Euclid down the column until a single row has a nonzero entry.
            loop {
                let nonzero: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
                if nonzero.len() <= 1 {
                    break;
                }
                let p = *nonzero.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
                for &r in &nonzero {
                    if r == p {
                        continue;
                    }
                    let q = rows[r][col].div_floor(&rows[p][col]);
                    let prow = rows[p].clone();
                    for (x, y) in rows[r].iter_mut().zip(&prow) {
                        *x -= &q * y;
                    }
                }
            }
            if let Some(p) = (0..rows.len()).find(|&r| !rows[r][col].is_zero()) {
                let mut row = rows.swap_remove(p);
                if row[col].is_negative() {
                    row.iter_mut().for_each(|x| *x = -&*x);
                }
                basis.push(row);
                pivots.push(col);
            }
            rows.retain(|r| r.iter().any(|x| !x.is_zero()));
            col += 1;
        }
        // Reduce entries above pivots.
        for k in 0..basis.len() {
            let pc = pivots[k];
            for above in 0..k {
                let q = basis[above][pc].div_floor(&basis[k][pc]);
                if !q.is_zero() {
                    let prow = basis[k].clone();
                    for (x, y) in basis[above].iter_mut().zip(&prow) {
                        *x -= &q * y;
                    }
                }
            }
        }
        Lattice { dim, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim, "lattice membership dimension mismatch");
        let mut r = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if r[pc].is_zero() {
                continue;
            }
            if !r[pc].is_multiple_of(&row[pc]) {
                return false;
            }
            let q = &r[pc] / &row[pc];
            for (x, y) in r.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
        r.iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::from_generators(self.dim, self.basis.iter().chain(&other.basis).cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::matrix::bigvec;

    #[test]
    fn membership() {
        let l = Lattice::from_generators(2, vec![bigvec(&[2, 4]), bigvec(&[6, 8])]);
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&bigvec(&[8, 12])));
        assert!(l.contains(&bigvec(&[0, 4])));
        assert!(!l.contains(&bigvec(&[0, 2])));
        assert!(!l.contains(&bigvec(&[1, 0])));
    }

    #[test]
    fn equality_via_containment() {
        let a = Lattice::from_generators(2, vec![bigvec(&[1, 1]), bigvec(&[0, 2])]);
        let b = Lattice::from_generators(2, vec![bigvec(&[1, -1]), bigvec(&[2, 0])]);
        assert!(a.contains_lattice(&b) && b.contains_lattice(&a));
        assert_eq!(a, b);
    }
}
