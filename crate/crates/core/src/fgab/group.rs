use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::lattice::Lattice;
use super::matrix::{BigSeq, IntMatrix};
use super::snf::{snf, Snf};
use crate::error::{Error, Result};

/// Isomorphism invariants of a finitely generated abelian group:
/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | ... | d_k`, all `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Invariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Invariants {
    pub fn trivial() -> Self {
        Invariants { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        Invariants { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl Serialize for Invariants {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Invariants", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.serialize_field("torsion", &BigSeq(&self.torsion))?;
        st.end()
    }
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finitely generated abelian group `Z^n_gens / rowspan(relations)`.
///
/// Equality is isomorphism: two groups compare equal when their invariant
/// factors agree. Use [`FgAbGroup::same_presentation`] for literal equality.
#[derive(Clone)]
pub struct FgAbGroup {
    n_gens: usize,
    relations: IntMatrix,
    canon: Canonical,
}

#[derive(Clone)]
struct Canonical {
    invariants: Invariants,
    /// Per canonical coordinate: 0 for a free coordinate, otherwise the
    /// modulus (1 means the coordinate is killed).
    moduli: Vec<BigInt>,
    /// Row vector `x` has canonical coordinates `x * v`.
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl FgAbGroup {
    /// Presents a group by generators and relation rows.
    pub fn new(n_gens: usize, relations: IntMatrix) -> Result<Self> {
        if relations.cols() != n_gens {
            return Err(Error::Shape(format!(
                "relation matrix has {} columns but the group has {} generators",
                relations.cols(),
                n_gens
            )));
        }
        let canon = Canonical::compute(n_gens, &relations);
        Ok(FgAbGroup { n_gens, relations, canon })
    }

    pub fn from_relations<T: Into<BigInt> + Clone>(n_gens: usize, rows: &[Vec<T>]) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n_gens) {
            return Err(Error::Shape(format!(
                "relation row has {} entries but the group has {} generators",
                bad.len(),
                n_gens
            )));
        }
        Self::new(n_gens, IntMatrix::from_rows_with_cols(rows, n_gens))
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, IntMatrix::zeros(0, rank)).expect("shape is consistent")
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `Z/n`; `n = 0` gives `Z`.
    pub fn cyclic(n: u64) -> Self {
        if n == 0 {
            return Self::free(1);
        }
        Self::new(1, IntMatrix::from_rows(&[vec![n]])).expect("shape is consistent")
    }

    /// Direct sum of cyclic groups with the given orders (0 meaning `Z`).
    pub fn from_orders(orders: &[u64]) -> Self {
        let n = orders.len();
        let rows: Vec<Vec<BigInt>> = orders
            .iter()
            .enumerate()
            .filter(|(_, &o)| o != 0)
            .map(|(i, &o)| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = BigInt::from(o);
                r
            })
            .collect();
        Self::new(n, IntMatrix::from_rows_with_cols(&rows, n)).expect("shape is consistent")
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn invariants(&self) -> &Invariants {
        &self.canon.invariants
    }

    pub fn is_trivial(&self) -> bool {
        self.canon.invariants.is_trivial()
    }

    pub fn is_finite(&self) -> bool {
        self.canon.invariants.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.canon.invariants.order()
    }

    /// Literal equality of presentations (generator count and relation rows).
    pub fn same_presentation(&self, other: &FgAbGroup) -> bool {
        self.n_gens == other.n_gens && self.relations == other.relations
    }

    pub fn relation_lattice(&self) -> Lattice {
        Lattice::from_generators(self.n_gens, self.relations.row_iter().map(<[BigInt]>::to_vec))
    }

    pub fn zero_element(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.n_gens]
    }

    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        let mut e = self.zero_element();
        e[i] = BigInt::one();
        e
    }

    /// Canonical coordinates of an element, reduced modulo the invariant factors.
    pub fn canonical_coords(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.n_gens, "element has the wrong number of coordinates");
        let c = &self.canon;
        (0..self.n_gens)
            .map(|j| {
                let raw: BigInt = (0..self.n_gens).map(|i| &x[i] * &c.v[(i, j)]).sum();
                let m = &c.moduli[j];
                if m.is_zero() {
                    raw
                } else {
                    raw.mod_floor(m)
                }
            })
            .collect()
    }

    /// Reduced representative: the element rebuilt from its canonical coordinates.
    pub fn normalize(&self, x: &[BigInt]) -> Vec<BigInt> {
        let c = self.canonical_coords(x);
        (0..self.n_gens)
            .map(|j| (0..self.n_gens).map(|i| &c[i] * &self.canon.v_inv[(i, j)]).sum())
            .collect()
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.canonical_coords(x).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        let d: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero_element(&d)
    }

    /// All elements of a finite group as reduced representatives.
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_finite() {
            return Err(Error::Infinite("cannot enumerate an infinite group".into()));
        }
        let idx: Vec<usize> = (0..self.n_gens).filter(|&j| self.canon.moduli[j] > BigInt::one()).collect();
        let mut coords = vec![vec![BigInt::zero(); self.n_gens]];
        for &j in &idx {
            let m = &self.canon.moduli[j];
            let mut next = Vec::new();
            for c in &coords {
                let mut k = BigInt::zero();
                while &k < m {
                    let mut c2 = c.clone();
                    c2[j] = k.clone();
                    next.push(c2);
                    k += 1;
                }
            }
            coords = next;
        }
        Ok(coords
            .into_iter()
            .map(|c| {
                (0..self.n_gens)
                    .map(|j| (0..self.n_gens).map(|i| &c[i] * &self.canon.v_inv[(i, j)]).sum())
                    .collect()
            })
            .collect())
    }

    pub fn direct_sum(groups: &[&FgAbGroup]) -> FgAbGroup {
        let mut rel = IntMatrix::zeros(0, 0);
        for g in groups {
            rel = rel.block_diag(&g.relations);
        }
        let n = groups.iter().map(|g| g.n_gens).sum();
        FgAbGroup::new(n, rel).expect("block sum keeps shapes consistent")
    }

    /// Tensor product over `Z`. Generator `(i, j)` has index `i * h.n_gens() + j`.
    pub fn tensor(&self, h: &FgAbGroup) -> FgAbGroup {
        let (n, m) = (self.n_gens, h.n_gens);
        let mut rows = Vec::new();
        for r in self.relations.row_iter() {
            for j in 0..m {
                let mut row = vec![BigInt::zero(); n * m];
                for i in 0..n {
                    row[i * m + j] = r[i].clone();
                }
                rows.push(row);
            }
        }
        for s in h.relations.row_iter() {
            for i in 0..n {
                let mut row = vec![BigInt::zero(); n * m];
                for j in 0..m {
                    row[i * m + j] = s[j].clone();
                }
                rows.push(row);
            }
        }
        FgAbGroup::new(n * m, IntMatrix::from_rows_with_cols(&rows, n * m)).expect("tensor shapes are consistent")
    }

    /// Bilinear pairing into `self ⊗ h`: the tensor of two elements.
    pub fn tensor_elements(&self, h: &FgAbGroup, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let m = h.n_gens;
        let mut out = vec![BigInt::zero(); self.n_gens * m];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    out[i * m + j] += a * b;
                }
            }
        }
        out
    }

    /// Quotient by the subgroup generated by `elems` (same generators, more relations).
    pub fn quotient_by(&self, elems: &[Vec<BigInt>]) -> FgAbGroup {
        let extra = IntMatrix::from_rows_with_cols(elems, self.n_gens);
        FgAbGroup::new(self.n_gens, self.relations.vstack(&extra)).expect("quotient keeps generator count")
    }
}

impl Canonical {
    fn compute(n: usize, relations: &IntMatrix) -> Canonical {
        let res: Snf = snf(relations);
        let mut moduli = vec![BigInt::zero(); n];
        for (i, d) in res.diagonal().into_iter().enumerate() {
            moduli[i] = d;
        }
        let torsion = moduli.iter().filter(|d| **d > BigInt::one()).cloned().collect();
        let invariants = Invariants { free_rank: n - res.rank, torsion };
        Canonical { invariants, moduli, v: res.v, v_inv: res.v_inv }
    }
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.invariants() == other.invariants()
    }
}

impl Eq for FgAbGroup {}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({} gens, {} relations: {})", self.n_gens, self.relations.rows(), self.invariants())
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.invariants())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::matrix::bigvec;

    fn inv(free: usize, tors: &[i64]) -> Invariants {
        Invariants { free_rank: free, torsion: bigvec(tors) }
    }

    #[test]
    fn presentations() {
        assert_eq!(FgAbGroup::from_relations(1, &[vec![4]]).unwrap().invariants(), &inv(0, &[4]));
        assert_eq!(FgAbGroup::from_relations(2, &[vec![2, 0], vec![0, 0]]).unwrap().invariants(), &inv(1, &[2]));
        assert_eq!(FgAbGroup::from_relations(2, &[vec![2, 4], vec![6, 8]]).unwrap().invariants(), &inv(0, &[2, 4]));
    }

    #[test]
    fn column_mismatch_is_an_error() {
        assert!(FgAbGroup::from_relations(3, &[vec![1, 2]]).is_err_and(|e| matches!(e, Error::Shape(_))));
    }

    #[test]
    fn tensor_examples() {
        let z4 = FgAbGroup::cyclic(4);
        let z6 = FgAbGroup::cyclic(6);
        assert_eq!(z4.tensor(&z6).invariants(), &inv(0, &[2]));
        let g = FgAbGroup::from_orders(&[2, 0]);
        assert_eq!(FgAbGroup::free(1).tensor(&g), g);
        // (Z/2 + Z) ⊗ Z/4 = Z/2⊗Z/4 + Z⊗Z/4 = Z/2 + Z/4
        assert_eq!(g.tensor(&z4).invariants(), &inv(0, &[2, 4]));
    }

    #[test]
    fn enumerate_finite() {
        let g = FgAbGroup::from_relations(2, &[vec![2, 4], vec![6, 8]]).unwrap();
        let els = g.elements().unwrap();
        assert_eq!(els.len(), 8);
        for (a, x) in els.iter().enumerate() {
            for y in &els[a + 1..] {
                assert!(!g.elements_equal(x, y));
            }
        }
        assert!(FgAbGroup::free(1).elements().is_err());
    }

    #[test]
    fn normalize_is_idempotent() {
        let g = FgAbGroup::from_orders(&[4, 0]);
        let x = bigvec(&[9, -3]);
        let n = g.normalize(&x);
        assert_eq!(n, bigvec(&[1, -3]));
        assert_eq!(g.normalize(&n), n);
    }
}
