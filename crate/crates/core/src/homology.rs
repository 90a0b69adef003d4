//! Integer chain complexes with exact homology, chain maps, mapping fibers,
//! shifts, sums and tensor products. Every complex carries the largest degree
//! whose chain group is known to be correct, and homology is refused above it.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dihedral::TruncSet;
use crate::error::{Error, Result};
use crate::fgab::{is_exact, kernel_basis, snf, solve_with, ExactnessReport, FgAbGroup, GroupHom, IntMatrix, Invariants};

/// A bounded complex of finitely generated free abelian groups.
///
/// Degrees `min_degree ..= min_degree + len - 1` are stored; all other degrees
/// are zero. `top` is the largest degree whose chain group is correct (`None`
/// when every degree is), so `H_k` is trustworthy for `k < top`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    min_degree: i64,
    ranks: Vec<usize>,
    /// `diffs[k]` is the boundary out of degree `min_degree + k`.
    diffs: Vec<IntMatrix>,
    top: Option<i64>,
    labels: Vec<Vec<String>>,
}

/// `H_k` with its presentation: generators are the cycle basis vectors.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub degree: i64,
    pub group: FgAbGroup,
    /// Cycle basis as columns in chain coordinates.
    pub cycles: IntMatrix,
}

/// One row of a homology table.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HomologyEntry {
    pub degree: i64,
    pub group: Invariants,
    pub display: String,
}

fn zero_matrix(rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::zeros(rows, cols)
}

fn min_top(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl ChainComplex {
    /// `diffs` lists the boundaries out of degrees `min_degree + 1, ...`;
    /// shapes and `d∘d = 0` are checked.
    pub fn new(min_degree: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>, top: Option<i64>) -> Result<Self> {
        if ranks.is_empty() {
            return Ok(Self::zero());
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::Shape(format!("{} ranks need {} differentials", ranks.len(), ranks.len() - 1)));
        }
        let mut all = vec![zero_matrix(0, ranks[0])];
        for (k, d) in diffs.into_iter().enumerate() {
            if d.shape() != (ranks[k], ranks[k + 1]) {
                return Err(Error::Shape(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    min_degree + k as i64 + 1,
                    d.rows(),
                    d.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
            all.push(d);
        }
        for k in 2..all.len() {
            if !all[k - 1].mul(&all[k]).is_zero() {
                return Err(Error::Internal(format!("d∘d ≠ 0 out of degree {}", min_degree + k as i64)));
            }
        }
        let labels = ranks.iter().map(|&r| (0..r).map(|i| format!("e{i}")).collect()).collect();
        Ok(ChainComplex { min_degree, ranks, diffs: all, top, labels })
    }

    pub fn zero() -> Self {
        ChainComplex { min_degree: 0, ranks: Vec::new(), diffs: Vec::new(), top: None, labels: Vec::new() }
    }

    /// `Z^rank` in a single degree.
    pub fn concentrated(degree: i64, rank: usize) -> Self {
        ChainComplex {
            min_degree: degree,
            ranks: vec![rank],
            diffs: vec![zero_matrix(0, rank)],
            top: None,
            labels: vec![(0..rank).map(|i| format!("e{i}")).collect()],
        }
    }

    /// Zero-differential complex with the given ranks starting at `min_degree`.
    pub fn from_ranks(min_degree: i64, ranks: &[usize]) -> Self {
        let diffs = (1..ranks.len()).map(|k| zero_matrix(ranks[k - 1], ranks[k])).collect();
        Self::new(min_degree, ranks.to_vec(), diffs, None).expect("zero differentials")
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.ranks.len() || labels.iter().zip(&self.ranks).any(|(l, &r)| l.len() != r) {
            return Err(Error::Shape("labels must match the ranks".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn with_top(mut self, top: Option<i64>) -> Self {
        self.top = top;
        self
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.ranks.len() as i64 - 1
    }

    pub fn top(&self) -> Option<i64> {
        self.top
    }

    /// Largest degree with trustworthy homology, `None` when all are.
    pub fn valid_up_to(&self) -> Option<i64> {
        self.top.map(|t| t - 1)
    }

    pub fn is_valid(&self, degree: i64) -> bool {
        self.top.is_none_or(|t| degree < t)
    }

    fn slot(&self, degree: i64) -> Option<usize> {
        let k = degree - self.min_degree;
        (k >= 0 && (k as usize) < self.ranks.len()).then_some(k as usize)
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.slot(degree).map_or(0, |k| self.ranks[k])
    }

    pub fn label(&self, degree: i64, i: usize) -> &str {
        &self.labels[self.slot(degree).expect("stored degree")][i]
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        self.slot(degree).map_or(&[], |k| self.labels[k].as_slice())
    }

    /// Boundary `C_degree -> C_{degree-1}`.
    pub fn differential(&self, degree: i64) -> IntMatrix {
        match self.slot(degree) {
            Some(k) if k > 0 => self.diffs[k].clone(),
            _ => zero_matrix(self.rank(degree - 1), self.rank(degree)),
        }
    }

    /// Degrees where homology is both stored-nonzero-possible and valid.
    pub fn homology_degrees(&self) -> Vec<i64> {
        if self.ranks.is_empty() {
            return Vec::new();
        }
        (self.min_degree..=self.max_degree()).filter(|&d| self.is_valid(d)).collect()
    }

    fn check_valid(&self, degree: i64) -> Result<()> {
        if self.is_valid(degree) {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!(
                "homology in degree {degree} needs chains above the truncation (valid up to {})",
                self.top.map_or("all".into(), |t| (t - 1).to_string())
            )))
        }
    }

    /// Invariant factors of `H_degree`.
    pub fn homology(&self, degree: i64) -> Result<Invariants> {
        self.check_valid(degree)?;
        let n = self.rank(degree);
        let out = snf(&self.differential(degree));
        let inc = snf(&self.differential(degree + 1));
        let torsion: Vec<BigInt> = inc.diagonal().into_iter().map(|d| d.abs()).filter(|d| *d > BigInt::one()).collect();
        Ok(Invariants { free_rank: n - out.rank - inc.rank, torsion })
    }

    /// `H_degree` presented on a cycle basis, for computing induced maps.
    pub fn homology_group(&self, degree: i64) -> Result<HomologyGroup> {
        self.check_valid(degree)?;
        let cycles = kernel_basis(&self.differential(degree));
        let res = snf(&cycles);
        let b = self.differential(degree + 1);
        let rows: Vec<Vec<BigInt>> = (0..b.cols())
            .map(|j| solve_with(&res, &b.col(j)).ok_or_else(|| Error::Internal("boundary is not a cycle".into())))
            .collect::<Result<_>>()?;
        let group = FgAbGroup::from_relations(cycles.cols(), &rows)?;
        Ok(HomologyGroup { degree, group, cycles })
    }

    /// Homology in every stored valid degree.
    pub fn homology_table(&self) -> Result<Vec<HomologyEntry>> {
        self.homology_degrees()
            .into_iter()
            .map(|d| {
                let g = self.homology(d)?;
                Ok(HomologyEntry { degree: d, display: g.to_string(), group: g })
            })
            .collect()
    }

    /// Trivial homology in every valid degree.
    pub fn is_acyclic(&self) -> Result<bool> {
        Ok(self.homology_table()?.iter().all(|e| e.group.is_trivial()))
    }

    /// Alternating sum of ranks.
    pub fn euler_characteristic(&self) -> i64 {
        (self.min_degree..=self.max_degree()).map(|d| if d.rem_euclid(2) == 0 { self.rank(d) as i64 } else { -(self.rank(d) as i64) }).sum()
    }

    /// `(C[k])_n = C_{n-k}` with differential `(-1)^k d`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let sign = if k.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
        ChainComplex {
            min_degree: self.min_degree + k,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&sign)).collect(),
            top: self.top.map(|t| t + k),
            labels: self.labels.clone(),
        }
    }

    /// Degreewise direct sum; bases are concatenated in order.
    pub fn direct_sum(parts: &[&ChainComplex]) -> ChainComplex {
        let nonempty: Vec<&&ChainComplex> = parts.iter().filter(|c| !c.ranks.is_empty()).collect();
        if nonempty.is_empty() {
            return ChainComplex::zero().with_top(parts.iter().fold(None, |t, c| min_top(t, c.top)));
        }
        let lo = nonempty.iter().map(|c| c.min_degree).min().expect("nonempty");
        let hi = nonempty.iter().map(|c| c.max_degree()).max().expect("nonempty");
        let ranks: Vec<usize> = (lo..=hi).map(|d| parts.iter().map(|c| c.rank(d)).sum()).collect();
        let diffs: Vec<IntMatrix> = (lo + 1..=hi)
            .map(|d| parts.iter().map(|c| c.differential(d)).reduce(|a, b| a.block_diag(&b)).expect("nonempty"))
            .collect();
        let labels = (lo..=hi)
            .map(|d| {
                parts
                    .iter()
                    .enumerate()
                    .flat_map(|(p, c)| c.labels(d).iter().map(move |l| format!("{p}:{l}")))
                    .collect()
            })
            .collect();
        let top = parts.iter().fold(None, |t, c| min_top(t, c.top));
        ChainComplex::new(lo, ranks, diffs, top).expect("sum of complexes").with_labels(labels).expect("labels")
    }

    /// Tensor product with Koszul signs: `d(a⊗b) = da⊗b + (-1)^p a⊗db`.
    /// The basis of degree `n` lists blocks `A_p ⊗ B_{n-p}` by increasing `p`.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        if self.ranks.is_empty() || other.ranks.is_empty() {
            return ChainComplex::zero();
        }
        let lo = self.min_degree + other.min_degree;
        let hi = self.max_degree() + other.max_degree();
        let blocks = |n: i64| -> Vec<(i64, usize)> {
            let mut out = Vec::new();
            let mut off = 0;
            for p in self.min_degree..=self.max_degree() {
                let q = n - p;
                let size = self.rank(p) * other.rank(q);
                if size > 0 {
                    out.push((p, off));
                    off += size;
                }
            }
            out
        };
        let ranks: Vec<usize> =
            (lo..=hi).map(|n| (self.min_degree..=self.max_degree()).map(|p| self.rank(p) * other.rank(n - p)).sum()).collect();
        let rank_at = |n: i64| if n < lo || n > hi { 0 } else { ranks[(n - lo) as usize] };
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let mut m = zero_matrix(rank_at(n - 1), rank_at(n));
            let src = blocks(n);
            let tgt = blocks(n - 1);
            let find = |p: i64| tgt.iter().find(|(pp, _)| *pp == p).map(|&(_, o)| o);
            for &(p, off) in &src {
                let q = n - p;
                let (ra, rb) = (self.rank(p), other.rank(q));
                // da ⊗ b lands in A_{p-1} ⊗ B_q.
                if let Some(to) = find(p - 1) {
                    let da = self.differential(p);
                    let rb_t = other.rank(q);
                    for i in 0..ra {
                        for j in 0..rb {
                            for k in 0..self.rank(p - 1) {
                                let c = &da[(k, i)];
                                if !c.is_zero() {
                                    m[(to + k * rb_t + j, off + i * rb + j)] = c.clone();
                                }
                            }
                        }
                    }
                }
                // (-1)^p a ⊗ db lands in A_p ⊗ B_{q-1}.
                if let Some(to) = find(p) {
                    let db = other.differential(q);
                    let rb_t = other.rank(q - 1);
                    let sign = if p.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
                    for i in 0..ra {
                        for j in 0..rb {
                            for k in 0..rb_t {
                                let c = &db[(k, j)];
                                if !c.is_zero() {
                                    let v = &m[(to + i * rb_t + k, off + i * rb + j)] + c * &sign;
                                    m[(to + i * rb_t + k, off + i * rb + j)] = v;
                                }
                            }
                        }
                    }
                }
            }
            diffs.push(m);
        }
        let top = match (self.top, other.top) {
            (None, None) => None,
            (a, b) => {
                let ta = a.map(|t| t + other.min_degree);
                let tb = b.map(|t| t + self.min_degree);
                min_top(ta, tb)
            }
        };
        let labels = (lo..=hi)
            .map(|n| {
                let mut out = Vec::new();
                for p in self.min_degree..=self.max_degree() {
                    for a in self.labels(p) {
                        for b in other.labels(n - p) {
                            out.push(format!("{a}⊗{b}"));
                        }
                    }
                }
                out
            })
            .collect();
        ChainComplex::new(lo, ranks, diffs, top).expect("tensor of complexes").with_labels(labels).expect("labels")
    }
}

/// Normalized chains: nondegenerate simplices with `∂ = Σ (-1)^i d_i`,
/// degenerate faces dropped. All degrees are valid when the set carries a
/// nondegenerate bound within its truncation, otherwise up to `q_max - 1`.
pub fn normalized_chains(x: &TruncSet) -> ChainComplex {
    let q_max = x.q_max();
    let nd: Vec<Vec<usize>> = (0..=q_max).map(|q| x.nondegenerate(q)).collect();
    let pos: Vec<std::collections::HashMap<usize, usize>> =
        nd.iter().map(|l| l.iter().enumerate().map(|(i, &k)| (k, i)).collect()).collect();
    let ranks: Vec<usize> = nd.iter().map(Vec::len).collect();
    let mut diffs = Vec::new();
    for q in 1..=q_max {
        let mut m = zero_matrix(ranks[q - 1], ranks[q]);
        for (col, &k) in nd[q].iter().enumerate() {
            for i in 0..=q {
                if let Some(&row) = pos[q - 1].get(&x.face(q, k, i)) {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    let v = &m[(row, col)] + BigInt::from(sign);
                    m[(row, col)] = v;
                }
            }
        }
        diffs.push(m);
    }
    let certified = x.nondeg_bound().is_some_and(|b| b <= q_max) && x.check_nondeg_bound().is_ok();
    let top = if certified { None } else { Some(q_max as i64) };
    let labels = nd.iter().enumerate().map(|(q, l)| l.iter().map(|&k| format!("{:?}", x.simplices(q)[k])).collect()).collect();
    ChainComplex::new(0, ranks, diffs, top).expect("simplicial identities give d∘d = 0").with_labels(labels).expect("labels")
}

/// A degree-preserving map of complexes.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    lo: i64,
    /// `maps[k]` acts in degree `lo + k`, shaped `target rank x source rank`.
    maps: Vec<IntMatrix>,
}

impl ChainMap {
    /// `maps` gives the components in degrees `lo, lo + 1, ...`; missing
    /// degrees are zero. Commutation with the differentials is checked.
    pub fn new(source: ChainComplex, target: ChainComplex, lo: i64, maps: Vec<IntMatrix>) -> Result<Self> {
        for (k, m) in maps.iter().enumerate() {
            let d = lo + k as i64;
            if m.shape() != (target.rank(d), source.rank(d)) {
                return Err(Error::Shape(format!(
                    "chain map in degree {d} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.rank(d),
                    source.rank(d)
                )));
            }
        }
        let f = ChainMap { source, target, lo, maps };
        let (a, b) = f.degree_span();
        for d in a..=b + 1 {
            let lhs = f.target.differential(d).mul(&f.at(d));
            let rhs = f.at(d - 1).mul(&f.source.differential(d));
            if lhs != rhs {
                return Err(Error::Internal(format!("chain map does not commute with d in degree {d}")));
            }
        }
        Ok(f)
    }

    fn degree_span(&self) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for c in [&self.source, &self.target] {
            if !c.ranks.is_empty() {
                lo = lo.min(c.min_degree);
                hi = hi.max(c.max_degree());
            }
        }
        if lo > hi {
            (0, -1)
        } else {
            (lo, hi)
        }
    }

    /// Builds a map degree by degree from a closure.
    pub fn from_fn(source: &ChainComplex, target: &ChainComplex, f: impl Fn(i64) -> IntMatrix) -> Result<Self> {
        let s = ChainMap { source: source.clone(), target: target.clone(), lo: 0, maps: Vec::new() };
        let (a, b) = s.degree_span();
        let maps = (a..=b).map(f).collect();
        ChainMap::new(source.clone(), target.clone(), a, maps)
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        ChainMap::from_fn(c, c, |d| IntMatrix::identity(c.rank(d))).expect("identity")
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> ChainMap {
        ChainMap::from_fn(source, target, |d| zero_matrix(target.rank(d), source.rank(d))).expect("zero map")
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    /// Component in degree `d`.
    pub fn at(&self, d: i64) -> IntMatrix {
        let k = d - self.lo;
        if k >= 0 && (k as usize) < self.maps.len() {
            self.maps[k as usize].clone()
        } else {
            zero_matrix(self.target.rank(d), self.source.rank(d))
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap> {
        let src = self.source.clone();
        let tgt = other.target.clone();
        ChainMap::from_fn(&src, &tgt, |d| other.at(d).mul(&self.at(d)))
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        ChainMap::from_fn(&self.source, &self.target, |d| self.at(d).add(&other.at(d)))
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap::from_fn(&self.source, &self.target, |d| self.at(d).neg()).expect("negation")
    }

    /// Map induced on `H_degree`.
    pub fn induced(&self, degree: i64) -> Result<GroupHom> {
        let hs = self.source.homology_group(degree)?;
        let ht = self.target.homology_group(degree)?;
        induced_between(&hs, &ht, &self.at(degree))
    }

    /// Whether the map is an isomorphism on homology in every degree valid on
    /// both sides.
    pub fn is_quasi_iso(&self) -> Result<bool> {
        let (a, b) = self.degree_span();
        for d in a..=b {
            if self.source.is_valid(d) && self.target.is_valid(d) && !self.induced(d)?.is_iso() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Shifts source, target and map by `k` (no sign on the map).
    pub fn shift(&self, k: i64) -> ChainMap {
        ChainMap { source: self.source.shift(k), target: self.target.shift(k), lo: self.lo + k, maps: self.maps.clone() }
    }

    pub fn direct_sum(parts: &[&ChainMap]) -> Result<ChainMap> {
        let src = ChainComplex::direct_sum(&parts.iter().map(|f| &f.source).collect::<Vec<_>>());
        let tgt = ChainComplex::direct_sum(&parts.iter().map(|f| &f.target).collect::<Vec<_>>());
        ChainMap::from_fn(&src, &tgt, |d| {
            parts
                .iter()
                .map(|f| f.at(d))
                .reduce(|a, b| a.block_diag(&b))
                .unwrap_or_else(|| zero_matrix(0, 0))
        })
    }

    /// `f ⊗ g`, matching the basis order of [`ChainComplex::tensor`].
    pub fn tensor(&self, other: &ChainMap) -> Result<ChainMap> {
        let src = self.source.tensor(&other.source);
        let tgt = self.target.tensor(&other.target);
        let comp = |n: i64| -> IntMatrix {
            let mut m = zero_matrix(tgt.rank(n), src.rank(n));
            let (mut so, mut to) = (0usize, 0usize);
            let ranges = |c: &ChainComplex| if c.ranks.is_empty() { (0, -1) } else { (c.min_degree, c.max_degree()) };
            let (sa, sb) = ranges(&self.source);
            let (ta, tb) = ranges(&self.target);
            let (lo, hi) = (sa.min(ta), sb.max(tb));
            for p in lo..=hi {
                let q = n - p;
                let s_size = self.source.rank(p) * other.source.rank(q);
                let t_size = self.target.rank(p) * other.target.rank(q);
                let in_src = p >= sa && p <= sb;
                let in_tgt = p >= ta && p <= tb;
                if s_size > 0 && t_size > 0 {
                    let block = self.at(p).kron(&other.at(q));
                    for i in 0..t_size {
                        for j in 0..s_size {
                            m[(to + i, so + j)] = block[(i, j)].clone();
                        }
                    }
                }
                if in_src {
                    so += s_size;
                }
                if in_tgt {
                    to += t_size;
                }
            }
            m
        };
        ChainMap::from_fn(&src, &tgt, comp)
    }
}

fn induced_between(hs: &HomologyGroup, ht: &HomologyGroup, f: &IntMatrix) -> Result<GroupHom> {
    let res = snf(&ht.cycles);
    let cols: Vec<Vec<BigInt>> = (0..hs.cycles.cols())
        .map(|j| {
            let img = f.mul_vec(&hs.cycles.col(j));
            solve_with(&res, &img).ok_or_else(|| Error::Internal("image of a cycle is not a cycle".into()))
        })
        .collect::<Result<_>>()?;
    GroupHom::new(hs.group.clone(), ht.group.clone(), IntMatrix::from_columns(&cols, ht.cycles.cols()))
}

/// Fiber sequence `Fib(f) -> X -> Y` with `Fib_k = X_k ⊕ Y_{k+1}` and
/// `d(x, y) = (dx, f x - dy)`.
#[derive(Clone, Debug)]
pub struct FiberSequence {
    pub map: ChainMap,
    pub fiber: ChainComplex,
    /// `(x, y) -> x`.
    pub projection: ChainMap,
}

pub fn mapping_fiber(f: &ChainMap) -> FiberSequence {
    let x = &f.source;
    let y = &f.target;
    let ranges: Vec<(i64, i64)> = [(x, 0i64), (y, -1)]
        .iter()
        .filter(|(c, _)| !c.ranks.is_empty())
        .map(|(c, s)| (c.min_degree + s, c.max_degree() + s))
        .collect();
    let top = min_top(x.top, y.top.map(|t| t - 1));
    if ranges.is_empty() {
        let fiber = ChainComplex::zero().with_top(top);
        let projection = ChainMap::zero(&fiber, x);
        return FiberSequence { map: f.clone(), fiber, projection };
    }
    let lo = ranges.iter().map(|r| r.0).min().expect("nonempty");
    let hi = ranges.iter().map(|r| r.1).max().expect("nonempty");
    let ranks: Vec<usize> = (lo..=hi).map(|k| x.rank(k) + y.rank(k + 1)).collect();
    let diffs: Vec<IntMatrix> = (lo + 1..=hi)
        .map(|k| {
            // Rows: X_{k-1} ⊕ Y_k; columns: X_k ⊕ Y_{k+1}.
            let top_row = x.differential(k).hstack(&zero_matrix(x.rank(k - 1), y.rank(k + 1)));
            let bottom = f.at(k).hstack(&y.differential(k + 1).neg());
            top_row.vstack(&bottom)
        })
        .collect();
    let labels = (lo..=hi)
        .map(|k| {
            x.labels(k).iter().map(|l| format!("x:{l}")).chain(y.labels(k + 1).iter().map(|l| format!("y:{l}"))).collect()
        })
        .collect();
    let fiber = ChainComplex::new(lo, ranks, diffs, top).expect("fiber differential squares to zero").with_labels(labels).expect("labels");
    let projection = ChainMap::from_fn(&fiber, x, |k| IntMatrix::identity(x.rank(k)).hstack(&zero_matrix(x.rank(k), y.rank(k + 1))))
        .expect("projection is a chain map");
    FiberSequence { map: f.clone(), fiber, projection }
}

/// Mapping cone, `Fib(f)[1]`.
pub fn mapping_cone(f: &ChainMap) -> ChainComplex {
    mapping_fiber(f).fiber.shift(1)
}

/// Exactness of `... -> H_k Fib -> H_k X -> H_k Y -> H_{k-1} Fib -> ...`
/// over the degrees valid for all three complexes.
#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    pub degrees: Vec<i64>,
    pub exact: bool,
    pub exactness: ExactnessReport,
}

pub fn les_check(seq: &FiberSequence) -> Result<LesReport> {
    let (x, y, fib) = (&seq.map.source, &seq.map.target, &seq.fiber);
    let spans: Vec<(i64, i64)> =
        [x, y, fib].iter().filter(|c| !c.ranks.is_empty()).map(|c| (c.min_degree, c.max_degree())).collect();
    if spans.is_empty() {
        return Ok(LesReport { degrees: Vec::new(), exact: true, exactness: ExactnessReport { exact: true, joints: Vec::new() } });
    }
    let lo = spans.iter().map(|s| s.0).min().expect("nonempty") - 1;
    let mut hi = spans.iter().map(|s| s.1).max().expect("nonempty") + 1;
    for c in [x, y, fib] {
        if let Some(t) = c.top {
            hi = hi.min(t - 1);
        }
    }
    if hi < lo {
        return Ok(LesReport { degrees: Vec::new(), exact: true, exactness: ExactnessReport { exact: true, joints: Vec::new() } });
    }
    let mut hf = Vec::new();
    let mut hx = Vec::new();
    let mut hy = Vec::new();
    for d in lo..=hi {
        hf.push(fib.homology_group(d)?);
        hx.push(x.homology_group(d)?);
        hy.push(y.homology_group(d)?);
    }
    let mut maps = Vec::new();
    for d in (lo..=hi).rev() {
        let i = (d - lo) as usize;
        maps.push(induced_between(&hf[i], &hx[i], &seq.projection.at(d))?);
        maps.push(induced_between(&hx[i], &hy[i], &seq.map.at(d))?);
        if d > lo {
            // δ[y] = [(0, y)] in Fib_{d-1} = X_{d-1} ⊕ Y_d.
            let inc = zero_matrix(x.rank(d - 1), y.rank(d)).vstack(&IntMatrix::identity(y.rank(d)));
            maps.push(induced_between(&hy[i], &hf[i - 1], &inc)?);
        }
    }
    let exactness = is_exact(&maps)?;
    Ok(LesReport { degrees: (lo..=hi).collect(), exact: exactness.exact, exactness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dihedral::{circle_model, dihedral_nerve_piece, point};
    use crate::fgab::bigvec;
    use crate::involutive_algebra::AffineMonoid;

    fn free(r: usize) -> Invariants {
        Invariants::free(r)
    }

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn point_and_circle() {
        let c = normalized_chains(&point(3));
        assert_eq!(c.homology_table().unwrap().iter().map(|e| e.group.clone()).collect::<Vec<_>>(), vec![free(1), free(0), free(0), free(0)]);
        let s = normalized_chains(&circle_model());
        assert_eq!((s.rank(0), s.rank(1), s.rank(2)), (1, 1, 0));
        assert!(s.differential(1).is_zero());
        assert_eq!(s.homology(0).unwrap(), free(1));
        assert_eq!(s.homology(1).unwrap(), free(1));
        assert_eq!(s.homology(7).unwrap(), free(0));
    }

    #[test]
    fn weight_two_chains() {
        let x = dihedral_nerve_piece(&AffineMonoid::natural(), &[vec![2]], 3).unwrap();
        let c = normalized_chains(&x);
        assert_eq!((c.rank(0), c.rank(1), c.rank(2)), (1, 2, 1));
        assert_eq!(c.labels(1), &["[0, 2]".to_string(), "[1, 1]".to_string()]);
        // d(0,2) = (2) - (2); d(1,1) = (2) - (2).
        assert!(c.differential(1).is_zero());
        // d(0,1,1) = (1,1) - (0,2) + (1,1).
        assert_eq!(c.differential(2), m(&[vec![-1], vec![2]]));
    }

    #[test]
    fn nerve_pieces_are_circles() {
        for j in 1..=5 {
            let x = dihedral_nerve_piece(&AffineMonoid::natural(), &[vec![j]], j as usize + 1).unwrap();
            let c = normalized_chains(&x);
            assert_eq!(c.top(), None);
            let h: Vec<Invariants> = c.homology_table().unwrap().into_iter().map(|e| e.group).collect();
            let mut expected = vec![free(1), free(1)];
            expected.resize(h.len(), free(0));
            assert_eq!(h, expected, "j = {j}");
        }
    }

    #[test]
    fn fixed_points_are_two_points() {
        let x = dihedral_nerve_piece(&AffineMonoid::natural(), &[vec![2]], 5).unwrap();
        let f = x.sd_sigma().unwrap().fixed_subset().unwrap();
        let c = normalized_chains(&f);
        let h: Vec<Invariants> = c.homology_table().unwrap().into_iter().map(|e| e.group).collect();
        assert_eq!(h, vec![free(2), free(0), free(0)]);
    }

    #[test]
    fn truncation_is_enforced() {
        let x = dihedral_nerve_piece(&AffineMonoid::natural(), &[vec![4]], 2).unwrap();
        let c = normalized_chains(&x);
        assert_eq!(c.top(), Some(2));
        assert!(c.homology(1).is_ok());
        assert!(matches!(c.homology(2), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn torsion_is_detected() {
        let c = ChainComplex::new(0, vec![1, 1], vec![m(&[vec![2]])], None).unwrap();
        assert_eq!(c.homology(0).unwrap(), Invariants { free_rank: 0, torsion: bigvec(&[2]) });
        assert_eq!(c.homology_group(0).unwrap().group.invariants(), &c.homology(0).unwrap());
        assert!(ChainComplex::new(0, vec![1, 1, 1], vec![m(&[vec![1]]), m(&[vec![1]])], None).is_err());
    }

    #[test]
    fn fiber_examples() {
        let s = normalized_chains(&circle_model());
        let fib = mapping_fiber(&ChainMap::identity(&s));
        assert!(fib.fiber.is_acyclic().unwrap());
        let z = ChainComplex::zero();
        let f0 = mapping_fiber(&ChainMap::zero(&z, &s));
        let shifted = s.shift(-1);
        for d in -1..=1 {
            assert_eq!(f0.fiber.homology(d).unwrap(), shifted.homology(d).unwrap());
        }
        // Two points mapping onto the circle's vertex.
        let two = ChainComplex::concentrated(0, 2);
        let f = ChainMap::new(two.clone(), s.clone(), 0, vec![m(&[vec![1, 1]])]).unwrap();
        let seq = mapping_fiber(&f);
        assert_eq!(seq.fiber.homology(0).unwrap(), free(2));
        assert_eq!(seq.fiber.homology(-1).unwrap(), free(0));
        assert!(les_check(&seq).unwrap().exact);
    }

    #[test]
    fn tensor_of_circles_is_a_torus() {
        let s = normalized_chains(&circle_model());
        let t = s.tensor(&s);
        let h: Vec<usize> = (0..=2).map(|d| t.homology(d).unwrap().free_rank).collect();
        assert_eq!(h, vec![1, 2, 1]);
        let c = ChainComplex::new(0, vec![1, 1], vec![m(&[vec![3]])], None).unwrap();
        let cc = c.tensor(&c);
        // Z/3 ⊗ Z/3 in degree 0 and Tor in degree 1.
        assert_eq!(cc.homology(0).unwrap(), Invariants { free_rank: 0, torsion: bigvec(&[3]) });
        assert_eq!(cc.homology(1).unwrap(), Invariants { free_rank: 0, torsion: bigvec(&[3]) });
    }

    #[test]
    fn shift_and_sum() {
        let s = normalized_chains(&circle_model());
        let sum = ChainComplex::direct_sum(&[&s, &s.shift(2)]);
        let h: Vec<usize> = (0..=3).map(|d| sum.homology(d).unwrap().free_rank).collect();
        assert_eq!(h, vec![1, 1, 1, 1]);
        assert_eq!(sum.euler_characteristic(), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_complex() -> impl Strategy<Value = ChainComplex> {
            // d2 = 0 forced by building d1 and d2 from a factorization through a zero.
            (1usize..4, 1usize..4, 1usize..4, prop::collection::vec(-3i64..4, 16), prop::collection::vec(-3i64..4, 16))
                .prop_map(|(a, b, c, e1, e2)| {
                    // C2 -> C1 -> C0 with d1 = P, d2 = K where P K = 0: pick K from the kernel of P.
                    let p = IntMatrix::from_rows(&(0..a).map(|i| (0..b).map(|j| e1[i * 4 + j]).collect()).collect::<Vec<_>>());
                    let k = kernel_basis(&p);
                    let kc = k.cols();
                    let mix = IntMatrix::from_rows_with_cols(
                        &(0..kc).map(|i| (0..c).map(|j| e2[(i * 4 + j) % 16]).collect()).collect::<Vec<_>>(),
                        c,
                    );
                    let d2 = if kc == 0 { zero_matrix(b, c) } else { k.mul(&mix) };
                    ChainComplex::new(0, vec![a, b, c], vec![p, d2], None).unwrap()
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn homology_groups_match_invariants(c in small_complex()) {
                for d in 0..=2 {
                    let g = c.homology_group(d).unwrap();
                    prop_assert_eq!(g.group.invariants(), &c.homology(d).unwrap());
                }
            }

            #[test]
            fn euler_characteristic_of_free_homology(c in small_complex()) {
                let table = c.homology_table().unwrap();
                let chi: i64 = table.iter().map(|e| if e.degree % 2 == 0 { e.group.free_rank as i64 } else { -(e.group.free_rank as i64) }).sum();
                prop_assert_eq!(chi, c.euler_characteristic());
            }

            #[test]
            fn fiber_long_exact_sequence(c in small_complex(), k in -2i64..3) {
                let f = ChainMap::from_fn(&c, &c, |d| IntMatrix::identity(c.rank(d)).scale(&BigInt::from(k))).unwrap();
                let seq = mapping_fiber(&f);
                prop_assert!(les_check(&seq).unwrap().exact);
            }
        }
    }
}
