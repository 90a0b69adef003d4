use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgab::{bigvec, snf, solve_with, IntMatrix};

/// A finitely generated submonoid of `Z^rank` with an involution given by an
/// integer matrix that squares to the identity and permutes the monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMonoid {
    rank: usize,
    generators: Vec<Vec<i64>>,
    involution: Vec<Vec<i64>>,
}

/// An element together with a certificate: multiplicities of the monoid
/// generators summing to the vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MonoidElement {
    pub vector: Vec<i64>,
    pub certificate: Vec<u32>,
}

impl MonoidElement {
    pub fn verify(&self, m: &AffineMonoid) -> bool {
        self.certificate.len() == m.generators.len() && m.evaluate(&self.certificate) == self.vector
    }
}

/// A linear weight map `Z^rank -> Z^k`, stored as `k` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMap {
    rows: Vec<Vec<i64>>,
    source_rank: usize,
}

impl WeightMap {
    pub fn new(source_rank: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != source_rank) {
            return Err(Error::Shape("weight map rows must have the ambient rank".into()));
        }
        Ok(WeightMap { rows, source_rank })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        WeightMap { rows, source_rank: n }
    }

    /// Sum of `blocks` consecutive blocks of size `n`: `Z^{n*blocks} -> Z^n`.
    pub fn block_sum(n: usize, blocks: usize) -> Self {
        let rows = (0..n).map(|i| (0..n * blocks).map(|j| i64::from(j % n == i)).collect()).collect();
        WeightMap { rows, source_rank: n * blocks }
    }

    pub fn zero(source_rank: usize, target_rank: usize) -> Self {
        WeightMap { rows: vec![vec![0; source_rank]; target_rank], source_rank }
    }

    pub fn target_rank(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows_with_cols(&self.rows, self.source_rank)
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A functional with `lambda . u > 0` for every `u`, searched among vectors
/// with entries in `{-1, 0, 1}`. `None` when no such functional is found.
fn positive_functional(dim: usize, vectors: &[Vec<i64>]) -> Option<Vec<i64>> {
    if vectors.is_empty() {
        return Some(vec![0; dim]);
    }
    if dim > 8 {
        // Only try coordinate-sign functionals in high rank.
        let sum: Vec<i64> = (0..dim).map(|i| vectors.iter().map(|v| v[i].signum()).sum::<i64>().signum()).collect();
        return vectors.iter().all(|u| dot(&sum, u) > 0).then_some(sum);
    }
    let total = 3usize.pow(dim as u32);
    (0..total).find_map(|mut code| {
        let lam: Vec<i64> = (0..dim)
            .map(|_| {
                let d = (code % 3) as i64 - 1;
                code /= 3;
                d
            })
            .collect();
        vectors.iter().all(|u| dot(&lam, u) > 0).then_some(lam)
    })
}

impl AffineMonoid {
    /// Builds the monoid and checks that the involution squares to the
    /// identity and sends each generator back into the monoid.
    pub fn new(rank: usize, generators: Vec<Vec<i64>>, involution: Vec<Vec<i64>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != rank) {
            return Err(Error::Shape("monoid generators must have the ambient rank".into()));
        }
        if involution.len() != rank || involution.iter().any(|r| r.len() != rank) {
            return Err(Error::Shape("monoid involution must be a square matrix of the ambient rank".into()));
        }
        let m = AffineMonoid { rank, generators, involution };
        for i in 0..rank {
            let e: Vec<i64> = (0..rank).map(|j| i64::from(i == j)).collect();
            if m.apply_involution(&m.apply_involution(&e)) != e {
                return Err(Error::IllDefined("monoid involution does not square to the identity".into()));
            }
        }
        for g in &m.generators {
            let wg = m.apply_involution(g);
            if m.member(&wg).is_none() {
                return Err(Error::IllDefined(format!("involution sends generator {g:?} to {wg:?}, outside the monoid")));
            }
        }
        Ok(m)
    }

    pub fn with_trivial_involution(rank: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(rank, generators, identity_rows(rank))
    }

    pub fn trivial() -> Self {
        AffineMonoid { rank: 0, generators: Vec::new(), involution: Vec::new() }
    }

    /// `N`.
    pub fn natural() -> Self {
        Self::natural_power(1)
    }

    /// `N^n` with trivial involution.
    pub fn natural_power(n: usize) -> Self {
        AffineMonoid { rank: n, generators: identity_rows(n), involution: identity_rows(n) }
    }

    /// `N^2` with the coordinate swap.
    pub fn natural_square_swap() -> Self {
        AffineMonoid { rank: 2, generators: identity_rows(2), involution: vec![vec![0, 1], vec![1, 0]] }
    }

    /// `Z` with trivial involution.
    pub fn integers() -> Self {
        AffineMonoid { rank: 1, generators: vec![vec![1], vec![-1]], involution: vec![vec![1]] }
    }

    /// `Z^sigma`: the integers with `x -> -x`.
    pub fn integers_sigma() -> Self {
        AffineMonoid { rank: 1, generators: vec![vec![1], vec![-1]], involution: vec![vec![-1]] }
    }

    /// Product monoid with the product involution.
    pub fn product(&self, other: &AffineMonoid) -> AffineMonoid {
        let rank = self.rank + other.rank;
        let pad = |g: &Vec<i64>, left: bool| -> Vec<i64> {
            if left {
                g.iter().copied().chain(std::iter::repeat_n(0, other.rank)).collect()
            } else {
                std::iter::repeat_n(0, self.rank).chain(g.iter().copied()).collect()
            }
        };
        let generators = self.generators.iter().map(|g| pad(g, true)).chain(other.generators.iter().map(|g| pad(g, false))).collect();
        let mut involution = vec![vec![0; rank]; rank];
        for i in 0..self.rank {
            involution[i][..self.rank].copy_from_slice(&self.involution[i]);
        }
        for i in 0..other.rank {
            involution[self.rank + i][self.rank..].copy_from_slice(&other.involution[i]);
        }
        AffineMonoid { rank, generators, involution }
    }

    /// `M^k`.
    pub fn power(&self, k: usize) -> AffineMonoid {
        (0..k).fold(AffineMonoid::trivial(), |acc, _| acc.product(self))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn involution_matrix(&self) -> &[Vec<i64>] {
        &self.involution
    }

    pub fn has_trivial_involution(&self) -> bool {
        self.involution == identity_rows(self.rank)
    }

    pub fn apply_involution(&self, v: &[i64]) -> Vec<i64> {
        self.involution.iter().map(|r| dot(r, v)).collect()
    }

    pub fn evaluate(&self, certificate: &[u32]) -> Vec<i64> {
        let mut out = vec![0; self.rank];
        for (c, g) in certificate.iter().zip(&self.generators) {
            for (o, x) in out.iter_mut().zip(g) {
                *o += i64::from(*c) * x;
            }
        }
        out
    }

    fn nonzero_generators(&self) -> Vec<usize> {
        (0..self.generators.len()).filter(|&i| self.generators[i].iter().any(|&x| x != 0)).collect()
    }

    /// A functional positive on every nonzero generator, if the monoid is pointed
    /// in a way detectable by a `{-1,0,1}` functional.
    pub fn grading(&self) -> Option<Vec<i64>> {
        let gens: Vec<Vec<i64>> = self.nonzero_generators().into_iter().map(|i| self.generators[i].clone()).collect();
        positive_functional(self.rank, &gens)
    }

    /// Decides membership with a certificate. Exact when the monoid admits a
    /// grading; otherwise the search is bounded by `|v|_1 + rank + 2`
    /// generators and a miss means "not found within the bound".
    pub fn member(&self, v: &[i64]) -> Option<MonoidElement> {
        assert_eq!(v.len(), self.rank, "element has the wrong rank");
        let idx = self.nonzero_generators();
        if v.iter().all(|&x| x == 0) {
            return Some(MonoidElement { vector: v.to_vec(), certificate: vec![0; self.generators.len()] });
        }
        if let Some(lam) = self.grading() {
            let target = dot(&lam, v);
            if target <= 0 {
                return None;
            }
            let costs: Vec<i64> = idx.iter().map(|&i| dot(&lam, &self.generators[i])).collect();
            let mut cert = vec![0u32; self.generators.len()];
            let mut cur = vec![0i64; self.rank];
            return self.dfs_member(&idx, &costs, 0, target, &mut cur, &mut cert, v);
        }
        let bound = v.iter().map(|x| x.unsigned_abs()).sum::<u64>() as usize + self.rank + 2;
        self.bfs_member(&idx, v, bound)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_member(
        &self,
        idx: &[usize],
        costs: &[i64],
        start: usize,
        budget: i64,
        cur: &mut Vec<i64>,
        cert: &mut Vec<u32>,
        v: &[i64],
    ) -> Option<MonoidElement> {
        if budget == 0 {
            return (cur.as_slice() == v).then(|| MonoidElement { vector: v.to_vec(), certificate: cert.clone() });
        }
        for k in start..idx.len() {
            if costs[k] > budget {
                continue;
            }
            let g = &self.generators[idx[k]];
            cur.iter_mut().zip(g).for_each(|(c, x)| *c += x);
            cert[idx[k]] += 1;
            let found = self.dfs_member(idx, costs, k, budget - costs[k], cur, cert, v);
            cert[idx[k]] -= 1;
            cur.iter_mut().zip(g).for_each(|(c, x)| *c -= x);
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn bfs_member(&self, idx: &[usize], v: &[i64], bound: usize) -> Option<MonoidElement> {
        let mut seen: BTreeMap<Vec<i64>, Vec<u32>> = BTreeMap::new();
        let zero = vec![0i64; self.rank];
        seen.insert(zero.clone(), vec![0; self.generators.len()]);
        let mut frontier = vec![zero];
        for _ in 0..bound {
            let mut next = Vec::new();
            for p in &frontier {
                for &i in idx {
                    let q: Vec<i64> = p.iter().zip(&self.generators[i]).map(|(a, b)| a + b).collect();
                    if seen.contains_key(&q) {
                        continue;
                    }
                    let mut c = seen[p].clone();
                    c[i] += 1;
                    if q == v {
                        return Some(MonoidElement { vector: q, certificate: c });
                    }
                    seen.insert(q.clone(), c);
                    next.push(q);
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        None
    }

    /// All elements with `weight(m) = v`, sorted lexicographically.
    ///
    /// Fails with [`Error::Infinite`] unless the fiber is provably finite:
    /// either the weight map is injective, or some functional of the weights
    /// is strictly positive on every nonzero generator.
    pub fn elements_of_weight(&self, weight: &WeightMap, v: &[i64]) -> Result<Vec<MonoidElement>> {
        if weight.source_rank != self.rank || v.len() != weight.target_rank() {
            return Err(Error::Shape("weight map does not match the monoid and the requested weight".into()));
        }
        let idx = self.nonzero_generators();
        let weights: Vec<Vec<i64>> = idx.iter().map(|&i| weight.apply(&self.generators[i])).collect();
        if let Some(lam) = positive_functional(weight.target_rank(), &weights) {
            let target = dot(&lam, v);
            let mut found: BTreeMap<Vec<i64>, Vec<u32>> = BTreeMap::new();
            if target >= 0 {
                let costs: Vec<i64> = weights.iter().map(|u| dot(&lam, u)).collect();
                let mut cert = vec![0u32; self.generators.len()];
                let mut cur = vec![0i64; self.rank];
                self.dfs_fiber(weight, v, &idx, &costs, 0, target, &mut cur, &mut cert, &mut found);
            }
            return Ok(found.into_iter().map(|(vector, certificate)| MonoidElement { vector, certificate }).collect());
        }
        let wm = weight.matrix();
        let res = snf(&wm);
        if res.rank == self.rank {
            let Some(sol) = solve_with(&res, &bigvec(v)) else { return Ok(Vec::new()) };
            let m: Vec<i64> = sol.iter().map(|x| i64::try_from(x).expect("small monoid coordinates")).collect();
            return Ok(self.member(&m).into_iter().collect());
        }
        Err(Error::Infinite(format!(
            "weight fiber over {v:?} is not provably finite: the weight map is not injective and no functional is positive on the generator weights"
        )))
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_fiber(
        &self,
        weight: &WeightMap,
        v: &[i64],
        idx: &[usize],
        costs: &[i64],
        start: usize,
        budget: i64,
        cur: &mut Vec<i64>,
        cert: &mut Vec<u32>,
        found: &mut BTreeMap<Vec<i64>, Vec<u32>>,
    ) {
        if budget == 0 {
            if weight.apply(cur) == v {
                found.entry(cur.clone()).or_insert_with(|| cert.clone());
            }
            return;
        }
        for k in start..idx.len() {
            if costs[k] > budget {
                continue;
            }
            let g = &self.generators[idx[k]];
            cur.iter_mut().zip(g).for_each(|(c, x)| *c += x);
            cert[idx[k]] += 1;
            self.dfs_fiber(weight, v, idx, costs, k, budget - costs[k], cur, cert, found);
            cert[idx[k]] -= 1;
            cur.iter_mut().zip(g).for_each(|(c, x)| *c -= x);
        }
    }

    /// Monoid elements in the box `[lo, hi]^rank`, sorted.
    pub fn elements_in_box(&self, lo: i64, hi: i64) -> Vec<MonoidElement> {
        let mut out = Vec::new();
        let mut v = vec![lo; self.rank];
        loop {
            if let Some(e) = self.member(&v) {
                out.push(e);
            }
            let mut k = self.rank;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if v[k] < hi {
                    v[k] += 1;
                    v[k + 1..].iter_mut().for_each(|x| *x = lo);
                    break;
                }
            }
        }
    }

    /// Orbits `{v, w(v)}` of the involution on a finite window of elements.
    /// Each orbit is sorted and the list is ordered by smallest member.
    pub fn sigma_orbits(&self, window: &[Vec<i64>]) -> Result<Vec<Vec<Vec<i64>>>> {
        let set: BTreeSet<Vec<i64>> = window.iter().cloned().collect();
        let mut orbits = BTreeSet::new();
        for v in &set {
            let wv = self.apply_involution(v);
            if !set.contains(&wv) {
                return Err(Error::Shape(format!("window is not closed under the involution: {v:?} -> {wv:?}")));
            }
            let mut orbit = vec![v.clone(), wv];
            orbit.sort();
            orbit.dedup();
            orbits.insert(orbit);
        }
        Ok(orbits.into_iter().collect())
    }
}

fn identity_rows(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vectors(es: &[MonoidElement]) -> Vec<Vec<i64>> {
        es.iter().map(|e| e.vector.clone()).collect()
    }

    #[test]
    fn weight_fibers() {
        let n = AffineMonoid::natural();
        assert_eq!(vectors(&n.elements_of_weight(&WeightMap::identity(1), &[3]).unwrap()), vec![vec![3]]);
        let n2 = AffineMonoid::natural_power(2);
        assert_eq!(vectors(&n2.elements_of_weight(&WeightMap::identity(2), &[1, 1]).unwrap()), vec![vec![1, 1]]);
        let fiber = n2.elements_of_weight(&WeightMap::block_sum(1, 2), &[2]).unwrap();
        assert_eq!(vectors(&fiber), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert!(fiber.iter().all(|e| e.verify(&n2)));
    }

    #[test]
    fn cone_fiber_is_a_singleton() {
        let m3 = AffineMonoid::with_trivial_involution(2, vec![vec![-1, 0], vec![0, -1], vec![1, -1], vec![-1, 1]]).unwrap();
        let fiber = m3.elements_of_weight(&WeightMap::identity(2), &[-1, 0]).unwrap();
        assert_eq!(vectors(&fiber), vec![vec![-1, 0]]);
        assert!(fiber[0].verify(&m3));
        // Oracle: members of {x1 + x2 <= 0} are exactly the vectors with non-positive sum.
        for a in -3..=3 {
            for b in -3..=3 {
                assert_eq!(m3.member(&[a, b]).is_some(), a + b <= 0, "({a},{b})");
            }
        }
    }

    #[test]
    fn infinite_fibers_are_rejected() {
        let z = AffineMonoid::integers();
        assert_eq!(vectors(&z.elements_of_weight(&WeightMap::identity(1), &[-4]).unwrap()), vec![vec![-4]]);
        assert!(matches!(z.elements_of_weight(&WeightMap::zero(1, 1), &[0]), Err(Error::Infinite(_))));
        let z2 = z.power(2);
        assert!(matches!(z2.elements_of_weight(&WeightMap::block_sum(1, 2), &[1]), Err(Error::Infinite(_))));
    }

    #[test]
    fn orbits() {
        let zs = AffineMonoid::integers_sigma();
        let window: Vec<Vec<i64>> = vectors(&zs.elements_in_box(-2, 2));
        assert_eq!(window.len(), 5);
        let orbits = zs.sigma_orbits(&window).unwrap();
        assert_eq!(orbits, vec![vec![vec![-2], vec![2]], vec![vec![-1], vec![1]], vec![vec![0]]]);

        let z = AffineMonoid::integers();
        let orbits = z.sigma_orbits(&[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(orbits.len(), 3);

        let n2 = AffineMonoid::natural_square_swap();
        let mut window = Vec::new();
        for k in 0..=1 {
            window.extend(vectors(&n2.elements_of_weight(&WeightMap::block_sum(1, 2), &[k]).unwrap()));
        }
        let orbits = n2.sigma_orbits(&window).unwrap();
        assert_eq!(orbits, vec![vec![vec![0, 0]], vec![vec![0, 1], vec![1, 0]]]);
        assert!(n2.sigma_orbits(&[vec![1, 0]]).is_err());
    }

    #[test]
    fn involution_must_preserve_the_monoid() {
        assert!(AffineMonoid::new(1, vec![vec![1]], vec![vec![-1]]).is_err());
        assert!(AffineMonoid::new(1, vec![vec![1], vec![-1]], vec![vec![-1]]).is_ok());
        assert!(AffineMonoid::new(1, vec![vec![1]], vec![vec![2]]).is_err());
    }
}
