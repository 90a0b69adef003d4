//! Cubical diagrams of chain complexes: punctured limits, total fibers, and
//! the projective-space computations assembled from them.
//!
//! Vertices of an `n`-cube are bitmasks `b` in `0..2^n`; bit `i` is the `i`-th
//! coordinate. The edge in direction `i` goes from `b` (bit `i` clear) to
//! `b | 1 << i`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dihedral::{circle_model_to, dihedral_nerve_piece, point, TruncSet};
use crate::error::{Error, Result};
use crate::fgab::{kernel_basis, snf, solve_with, IntMatrix, Invariants};
use crate::homology::{
    les_check, mapping_cone, mapping_fiber, normalized_chains, ChainComplex, ChainMap, HomologyEntry,
};
use crate::involutive_algebra::AffineMonoid;

fn weight(b: usize) -> i64 {
    b.count_ones() as i64
}

fn parity_sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `(-1)^{#{l < i : b_l = 1}}`.
fn eps(b: usize, i: usize) -> i64 {
    parity_sign(weight(b & ((1 << i) - 1)))
}

/// Inserts `bit` at position `i` of `c`, shifting the higher bits up.
fn insert_bit(c: usize, i: usize, bit: bool) -> usize {
    let low = c & ((1 << i) - 1);
    low | ((c >> i) << (i + 1)) | (usize::from(bit) << i)
}

fn vertex_name(b: usize, dim: usize) -> String {
    (0..dim).map(|i| if b >> i & 1 == 1 { '1' } else { '0' }).collect()
}

fn span(cs: &[&ChainComplex]) -> Option<(i64, i64)> {
    let nonempty: Vec<_> = cs.iter().filter(|c| c.max_degree() >= c.min_degree()).collect();
    if nonempty.is_empty() {
        return None;
    }
    Some((
        nonempty.iter().map(|c| c.min_degree()).min().expect("nonempty"),
        nonempty.iter().map(|c| c.max_degree()).max().expect("nonempty"),
    ))
}

fn same_complex(a: &ChainComplex, b: &ChainComplex) -> bool {
    let Some((lo, hi)) = span(&[a, b]) else { return true };
    (lo..=hi + 1).all(|d| a.rank(d) == b.rank(d) && a.differential(d) == b.differential(d))
}

fn same_map(f: &ChainMap, g: &ChainMap) -> bool {
    let Some((lo, hi)) = span(&[f.source(), f.target()]) else { return true };
    (lo..=hi).all(|d| f.at(d) == g.at(d))
}

fn place(m: &mut IntMatrix, r0: usize, c0: usize, block: &IntMatrix, sign: i64) {
    let s = BigInt::from(sign);
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            if !block[(r, c)].is_zero() {
                m[(r0 + r, c0 + c)] = &block[(r, c)] * &s;
            }
        }
    }
}

fn homology_equal(a: &[HomologyEntry], b: &[HomologyEntry]) -> bool {
    let collect = |t: &[HomologyEntry]| -> BTreeMap<i64, Invariants> {
        t.iter().filter(|e| !e.group.is_trivial()).map(|e| (e.degree, e.group.clone())).collect()
    };
    collect(a) == collect(b)
}

/// A commuting `n`-cube of chain complexes.
#[derive(Clone, Debug)]
pub struct CubeDiagram {
    dim: usize,
    entries: Vec<ChainComplex>,
    edges: Vec<Vec<Option<ChainMap>>>,
}

impl CubeDiagram {
    /// `edge(b, i)` must map `entries[b]` to `entries[b | 1 << i]`. Endpoints
    /// and commutativity of every square are checked.
    pub fn new(dim: usize, entries: Vec<ChainComplex>, mut edge: impl FnMut(usize, usize) -> Result<ChainMap>) -> Result<Self> {
        if entries.len() != 1 << dim {
            return Err(Error::Shape(format!("a {dim}-cube needs {} entries, got {}", 1 << dim, entries.len())));
        }
        let mut edges = vec![vec![None; dim]; 1 << dim];
        for b in 0..1usize << dim {
            for i in (0..dim).filter(|i| b >> i & 1 == 0) {
                let f = edge(b, i)?;
                if !same_complex(f.source(), &entries[b]) || !same_complex(f.target(), &entries[b | 1 << i]) {
                    return Err(Error::Shape(format!(
                        "edge {} -> {} has the wrong endpoints",
                        vertex_name(b, dim),
                        vertex_name(b | 1 << i, dim)
                    )));
                }
                edges[b][i] = Some(f);
            }
        }
        let cube = CubeDiagram { dim, entries, edges };
        for b in 0..1usize << dim {
            for i in 0..dim {
                for k in i + 1..dim {
                    if b >> i & 1 == 1 || b >> k & 1 == 1 {
                        continue;
                    }
                    let a = cube.edge(b, i).then(cube.edge(b | 1 << i, k))?;
                    let c = cube.edge(b, k).then(cube.edge(b | 1 << k, i))?;
                    if !same_map(&a, &c) {
                        return Err(Error::IllDefined(format!(
                            "square at {} in directions {i}, {k} does not commute",
                            vertex_name(b, dim)
                        )));
                    }
                }
            }
        }
        Ok(cube)
    }

    /// The 1-cube of a single map.
    pub fn from_map(f: &ChainMap) -> Self {
        CubeDiagram {
            dim: 1,
            entries: vec![f.source().clone(), f.target().clone()],
            edges: vec![vec![Some(f.clone())], vec![None]],
        }
    }

    /// Every entry `c`, every edge the identity.
    pub fn constant(c: &ChainComplex, dim: usize) -> Self {
        let id = ChainMap::identity(c);
        let edges = (0..1usize << dim)
            .map(|b| (0..dim).map(|i| (b >> i & 1 == 0).then(|| id.clone())).collect())
            .collect();
        CubeDiagram { dim, entries: vec![c.clone(); 1 << dim], edges }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, b: usize) -> &ChainComplex {
        &self.entries[b]
    }

    /// Edge out of `b` in direction `i`; bit `i` of `b` must be clear.
    pub fn edge(&self, b: usize, i: usize) -> &ChainMap {
        self.edges[b][i].as_ref().expect("edge direction must point away from the vertex")
    }

    /// The `(n-1)`-face with coordinate `i` fixed to `side`.
    pub fn face(&self, i: usize, side: bool) -> CubeDiagram {
        assert!(i < self.dim, "face direction out of range");
        let dim = self.dim - 1;
        let lift = |c: usize| insert_bit(c, i, side);
        let entries = (0..1usize << dim).map(|c| self.entries[lift(c)].clone()).collect();
        let edges = (0..1usize << dim)
            .map(|c| {
                (0..dim)
                    .map(|k| {
                        let orig = if k < i { k } else { k + 1 };
                        (c >> k & 1 == 0).then(|| self.edge(lift(c), orig).clone())
                    })
                    .collect()
            })
            .collect();
        CubeDiagram { dim, entries, edges }
    }

    /// Sub-cube where the listed coordinates vary and all others are 0.
    pub fn restrict(&self, free: &[usize]) -> CubeDiagram {
        let dim = free.len();
        let lift = |c: usize| (0..dim).filter(|j| c >> j & 1 == 1).fold(0, |b, j| b | 1 << free[j]);
        let entries = (0..1usize << dim).map(|c| self.entries[lift(c)].clone()).collect();
        let edges = (0..1usize << dim)
            .map(|c| (0..dim).map(|k| (c >> k & 1 == 0).then(|| self.edge(lift(c), free[k]).clone())).collect())
            .collect();
        CubeDiagram { dim, entries, edges }
    }

    /// The cube `f_1 ⊗ ... ⊗ f_n`.
    pub fn tensor_of_maps(maps: &[ChainMap]) -> Result<CubeDiagram> {
        let mut cube = CubeDiagram::constant(&ChainComplex::concentrated(0, 1), 0);
        for f in maps {
            cube = cube.tensor_with(f)?;
        }
        Ok(cube)
    }

    /// `Q ⊗ f`, with `f` as the new last coordinate.
    pub fn tensor_with(&self, f: &ChainMap) -> Result<CubeDiagram> {
        let dim = self.dim + 1;
        let ends = [f.source().clone(), f.target().clone()];
        let low = (1usize << self.dim) - 1;
        let entries = (0..1usize << dim).map(|b| self.entries[b & low].tensor(&ends[b >> self.dim])).collect();
        let mut edges = vec![vec![None; dim]; 1 << dim];
        for (b, row) in edges.iter_mut().enumerate() {
            let (lo, t) = (b & low, b >> self.dim);
            for (i, slot) in row.iter_mut().enumerate() {
                if b >> i & 1 == 1 {
                    continue;
                }
                *slot = Some(if i < self.dim {
                    self.edge(lo, i).tensor(&ChainMap::identity(&ends[t]))?
                } else {
                    ChainMap::identity(&self.entries[lo]).tensor(f)?
                });
            }
        }
        CubeDiagram::new(dim, entries, |b, i| Ok(edges[b][i].clone().expect("edge present")))
    }
}

#[derive(Clone, Debug)]
struct Block {
    vertex: usize,
    entry_degree: i64,
    offset: usize,
}

/// A complex assembled from cube entries, with its block layout.
#[derive(Clone, Debug)]
pub struct Assembled {
    pub complex: ChainComplex,
    blocks: BTreeMap<i64, Vec<Block>>,
}

impl Assembled {
    fn blocks(&self, k: i64) -> &[Block] {
        self.blocks.get(&k).map_or(&[], Vec::as_slice)
    }
}

/// `⊕_v Q(v)_{k + shift(v)}` in degree `k`, with differential
/// `diag(v) d + Σ edge_sign(v, i) f_i` over edges between listed vertices.
fn assemble(
    cube: &CubeDiagram,
    vertices: &[usize],
    shift: impl Fn(usize) -> i64,
    diag: impl Fn(usize) -> i64,
    edge_sign: impl Fn(usize, usize) -> i64,
) -> Assembled {
    let top = vertices.iter().fold(None, |t: Option<i64>, &v| match (t, cube.entry(v).top()) {
        (t, None) => t,
        (None, Some(x)) => Some(x - shift(v)),
        (Some(t), Some(x)) => Some(t.min(x - shift(v))),
    });
    let ranges: Vec<(i64, i64)> = vertices
        .iter()
        .map(|&v| (cube.entry(v), shift(v)))
        .filter(|(c, _)| c.max_degree() >= c.min_degree())
        .map(|(c, s)| (c.min_degree() - s, c.max_degree() - s))
        .collect();
    if ranges.is_empty() {
        return Assembled { complex: ChainComplex::zero().with_top(top), blocks: BTreeMap::new() };
    }
    let lo = ranges.iter().map(|r| r.0).min().expect("nonempty");
    let hi = ranges.iter().map(|r| r.1).max().expect("nonempty");
    let mut blocks = BTreeMap::new();
    let mut ranks = Vec::new();
    let mut labels = Vec::new();
    for k in lo..=hi {
        let mut off = 0;
        let mut list = Vec::new();
        let mut names = Vec::new();
        for &v in vertices {
            let e = k + shift(v);
            let c = cube.entry(v);
            if c.rank(e) == 0 {
                continue;
            }
            list.push(Block { vertex: v, entry_degree: e, offset: off });
            names.extend(c.labels(e).iter().map(|l| format!("{}:{l}", vertex_name(v, cube.dim))));
            off += c.rank(e);
        }
        ranks.push(off);
        labels.push(names);
        blocks.insert(k, list);
    }
    let find = |blocks: &BTreeMap<i64, Vec<Block>>, k: i64, v: usize| -> Option<Block> {
        blocks.get(&k).and_then(|l| l.iter().find(|b| b.vertex == v).cloned())
    };
    let mut diffs = Vec::new();
    for k in lo + 1..=hi {
        let mut m = IntMatrix::zeros(ranks[(k - 1 - lo) as usize], ranks[(k - lo) as usize]);
        for blk in &blocks[&k] {
            let v = blk.vertex;
            let e = blk.entry_degree;
            if let Some(tgt) = find(&blocks, k - 1, v) {
                place(&mut m, tgt.offset, blk.offset, &cube.entry(v).differential(e), diag(v));
            }
            for i in (0..cube.dim).filter(|i| v >> i & 1 == 0) {
                let w = v | 1 << i;
                if !vertices.contains(&w) {
                    continue;
                }
                if let Some(tgt) = find(&blocks, k - 1, w) {
                    debug_assert_eq!(tgt.entry_degree, e);
                    place(&mut m, tgt.offset, blk.offset, &cube.edge(v, i).at(e), edge_sign(v, i));
                }
            }
        }
        diffs.push(m);
    }
    let complex = ChainComplex::new(lo, ranks, diffs, top)
        .expect("cubical total complex squares to zero")
        .with_labels(labels)
        .expect("labels");
    Assembled { complex, blocks }
}

/// Homotopy limit of the cube with the initial vertex removed:
/// `P_k = ⊕_{b ≠ 0} Q(b)_{k + |b| - 1}`.
pub fn punctured_limit(cube: &CubeDiagram) -> Assembled {
    let vertices: Vec<usize> = (1..1usize << cube.dim).collect();
    assemble(cube, &vertices, |b| weight(b) - 1, |b| parity_sign(weight(b) - 1), eps)
}

/// Total fiber `fib(Q(0) -> holim_{b ≠ 0} Q(b))` with its block layout.
#[derive(Clone, Debug)]
pub struct TotalFiber {
    pub complex: ChainComplex,
    pub comparison: ChainMap,
    pub limit: Assembled,
    initial: ChainComplex,
}

impl TotalFiber {
    fn blocks(&self, k: i64) -> Vec<Block> {
        let r0 = self.initial.rank(k);
        let mut out = Vec::new();
        if r0 > 0 {
            out.push(Block { vertex: 0, entry_degree: k, offset: 0 });
        }
        out.extend(self.limit.blocks(k + 1).iter().map(|b| Block { offset: b.offset + r0, ..b.clone() }));
        out
    }
}

pub fn total_fiber(cube: &CubeDiagram) -> TotalFiber {
    let limit = punctured_limit(cube);
    let q0 = cube.entry(0);
    let comparison = ChainMap::from_fn(q0, &limit.complex, |k| {
        let mut m = IntMatrix::zeros(limit.complex.rank(k), q0.rank(k));
        for blk in limit.blocks(k) {
            if weight(blk.vertex) == 1 {
                let i = blk.vertex.trailing_zeros() as usize;
                place(&mut m, blk.offset, 0, &cube.edge(0, i).at(k), 1);
            }
        }
        m
    })
    .expect("comparison map commutes with the differentials");
    let complex = mapping_fiber(&comparison).fiber;
    TotalFiber { complex, comparison, limit, initial: q0.clone() }
}

/// Certificate that `tfib(Q) -> tfib(front) -> tfib(back)` is a fiber
/// sequence in one direction.
#[derive(Clone, Debug, Serialize)]
pub struct RecursionReport {
    pub direction: usize,
    pub tfib: Vec<HomologyEntry>,
    pub front: Vec<HomologyEntry>,
    pub back: Vec<HomologyEntry>,
    /// `tfib(Q)` is isomorphic, by an explicit signed identification, to the
    /// fiber of the induced map `tfib(front) -> tfib(back)`.
    pub chain_iso: bool,
    pub les_exact: bool,
    pub ok: bool,
}

pub fn tfib_recursion_check(cube: &CubeDiagram, i: usize) -> Result<RecursionReport> {
    if i >= cube.dim {
        return Err(Error::OutOfRange(format!("direction {i} in a {}-cube", cube.dim)));
    }
    let whole = total_fiber(cube);
    let front = total_fiber(&cube.face(i, false));
    let back = total_fiber(&cube.face(i, true));
    let phi = ChainMap::from_fn(&front.complex, &back.complex, |k| {
        let mut m = IntMatrix::zeros(back.complex.rank(k), front.complex.rank(k));
        let targets = back.blocks(k);
        for blk in front.blocks(k) {
            let b = insert_bit(blk.vertex, i, false);
            if let Some(t) = targets.iter().find(|t| t.vertex == blk.vertex) {
                debug_assert_eq!(t.entry_degree, blk.entry_degree);
                place(&mut m, t.offset, blk.offset, &cube.edge(b, i).at(blk.entry_degree), 1);
            }
        }
        m
    })?;
    let seq = mapping_fiber(&phi);
    let tau = |b: usize| -> i64 {
        if b >> i & 1 == 0 || b == 1 << i {
            1
        } else {
            -eps(b, i)
        }
    };
    let matched = std::cell::Cell::new(true);
    let psi = ChainMap::from_fn(&seq.fiber, &whole.complex, |k| {
        let mut m = IntMatrix::zeros(whole.complex.rank(k), seq.fiber.rank(k));
        let targets = whole.blocks(k);
        let rf = front.complex.rank(k);
        let sources = front
            .blocks(k)
            .into_iter()
            .map(|b| (insert_bit(b.vertex, i, false), b.entry_degree, b.offset))
            .chain(back.blocks(k + 1).into_iter().map(|b| (insert_bit(b.vertex, i, true), b.entry_degree, b.offset + rf)));
        for (v, e, off) in sources {
            match targets.iter().find(|t| t.vertex == v && t.entry_degree == e) {
                Some(t) => place(&mut m, t.offset, off, &IntMatrix::identity(cube.entry(v).rank(e)), tau(v)),
                None => matched.set(false),
            }
        }
        m
    });
    let span = span(&[&seq.fiber, &whole.complex]);
    let chain_iso = match psi {
        Ok(_) => matched.get() && span.is_none_or(|(lo, hi)| (lo..=hi).all(|k| seq.fiber.rank(k) == whole.complex.rank(k))),
        Err(_) => false,
    };
    let les = les_check(&seq)?;
    let tfib = whole.complex.homology_table()?;
    let ok = chain_iso && les.exact && homology_equal(&tfib, &seq.fiber.homology_table()?);
    Ok(RecursionReport {
        direction: i,
        tfib,
        front: front.complex.homology_table()?,
        back: back.complex.homology_table()?,
        chain_iso,
        les_exact: les.exact,
        ok,
    })
}

/// Homology of a tensor product of fibers against the total fiber of the
/// corresponding tensor cube.
#[derive(Clone, Debug, Serialize)]
pub struct SmashReport {
    pub factors: usize,
    pub tensor_of_fibers: Vec<HomologyEntry>,
    pub total_fiber: Vec<HomologyEntry>,
    pub ok: bool,
}

/// `fib(f_1) ⊗ ... ⊗ fib(f_n)` against `tfib(f_1 ⊗ ... ⊗ f_n)`.
pub fn smash_cube_check(maps: &[ChainMap]) -> Result<SmashReport> {
    let fibers = maps
        .iter()
        .map(|f| mapping_fiber(f).fiber)
        .fold(ChainComplex::concentrated(0, 1), |acc, c| acc.tensor(&c));
    let cube = CubeDiagram::tensor_of_maps(maps)?;
    let tf = total_fiber(&cube).complex;
    let a = fibers.homology_table()?;
    let b = tf.homology_table()?;
    Ok(SmashReport { factors: maps.len(), ok: homology_equal(&a, &b), tensor_of_fibers: a, total_fiber: b })
}

/// `tfib(Q) ⊗ fib(f)` against `tfib(Q ⊗ f)`.
pub fn tensor_fiber_check(cube: &CubeDiagram, f: &ChainMap) -> Result<SmashReport> {
    let lhs = total_fiber(cube).complex.tensor(&mapping_fiber(f).fiber);
    let rhs = total_fiber(&cube.tensor_with(f)?).complex;
    let a = lhs.homology_table()?;
    let b = rhs.homology_table()?;
    Ok(SmashReport { factors: cube.dim + 1, ok: homology_equal(&a, &b), tensor_of_fibers: a, total_fiber: b })
}

/// Size-`q` subsets of `0..d` in lexicographic order.
pub fn subsets(d: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for x in start..d {
            cur.push(x);
            go(x + 1, d, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if q <= d {
        go(0, d, q, &mut Vec::new(), &mut out);
    }
    out
}

fn exterior_labels(d: usize, q: usize) -> Vec<String> {
    subsets(d, q)
        .iter()
        .map(|s| if s.is_empty() { "1".into() } else { s.iter().map(|x| format!("e{x}")).collect::<Vec<_>>().join("^") })
        .collect()
}

/// Chains on the torus `T^d`: the exterior algebra `Λ(Z^d)` with zero
/// differential, `Λ^q` in degree `q`.
pub fn torus_complex(d: usize) -> ChainComplex {
    let ranks: Vec<usize> = (0..=d).map(|q| subsets(d, q).len()).collect();
    let labels = (0..=d).map(|q| exterior_labels(d, q)).collect();
    ChainComplex::from_ranks(0, &ranks).with_labels(labels).expect("labels")
}

/// Reduced chains of the torus: degrees `1..=d`.
pub fn reduced_torus_complex(d: usize) -> ChainComplex {
    if d == 0 {
        return ChainComplex::zero();
    }
    let ranks: Vec<usize> = (1..=d).map(|q| subsets(d, q).len()).collect();
    let labels = (1..=d).map(|q| exterior_labels(d, q)).collect();
    ChainComplex::from_ranks(1, &ranks).with_labels(labels).expect("labels")
}

/// `Λ^q(a)`: the matrix of `q x q` minors, rows and columns indexed by
/// subsets in lexicographic order.
pub fn exterior_power(a: &IntMatrix, q: usize) -> IntMatrix {
    let rows = subsets(a.rows(), q);
    let cols = subsets(a.cols(), q);
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (r, rs) in rows.iter().enumerate() {
        for (c, cs) in cols.iter().enumerate() {
            m[(r, c)] = if q == 0 { BigInt::one() } else { a.submatrix(rs, cs).determinant() };
        }
    }
    m
}

/// The map of tori `T^s -> T^t` induced by a lattice map `a: Z^s -> Z^t`
/// (shape `t x s`), on exterior-algebra chains.
pub fn torus_map(a: &IntMatrix) -> ChainMap {
    let (src, tgt) = (torus_complex(a.cols()), torus_complex(a.rows()));
    ChainMap::from_fn(&src, &tgt, |q| if q < 0 { IntMatrix::zeros(0, 0) } else { exterior_power(a, q as usize) })
        .expect("zero differentials")
}

pub fn reduced_torus_map(a: &IntMatrix) -> ChainMap {
    let (src, tgt) = (reduced_torus_complex(a.cols()), reduced_torus_complex(a.rows()));
    ChainMap::from_fn(&src, &tgt, |q| if q < 1 { IntMatrix::zeros(tgt.rank(q), src.rank(q)) } else { exterior_power(a, q as usize) })
        .expect("zero differentials")
}

/// Reduced chains of the smash power `(S^1)^{∧d}`: `Z` in degree `d`, the
/// top exterior power of the torus.
pub fn smash_model(d: usize) -> ChainComplex {
    ChainComplex::concentrated(d as i64, 1)
}

/// Map of smash powers induced by `a`: the torus map followed by the
/// quotient onto the top exterior degree.
pub fn smash_map(a: &IntMatrix) -> ChainMap {
    let (s, t) = (a.cols(), a.rows());
    let full = torus_map(a);
    let (src, tgt) = (smash_model(s), smash_model(t));
    ChainMap::from_fn(&src, &tgt, |q| {
        let mut m = IntMatrix::zeros(tgt.rank(q), src.rank(q));
        if q == s as i64 && q == t as i64 {
            let c = full.at(q);
            m[(0, 0)] = c[(c.rows() - 1, c.cols() - 1)].clone();
        }
        m
    })
    .expect("zero differentials")
}

/// Cofiber of the map `(S^σ)^{∧(d-1)} -> (S^σ)^{∧d}` induced by
/// `a -> (a, -Σa)`, on underlying reduced chains.
#[derive(Clone, Debug, Serialize)]
pub struct HMapReport {
    pub d: usize,
    pub lattice_map: Vec<Vec<i64>>,
    pub cofiber: Vec<HomologyEntry>,
    pub ok: bool,
}

pub fn h_lattice_map(d: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..d).map(|r| (0..d - 1).map(|c| if r == d - 1 { -1 } else { i64::from(r == c) }).collect()).collect();
    IntMatrix::from_rows_with_cols(&rows, d - 1)
}

pub fn h_map_cofiber_check(d: usize) -> Result<HMapReport> {
    if d == 0 {
        return Err(Error::OutOfRange("the smash-power map needs d >= 1".into()));
    }
    let a = h_lattice_map(d);
    let cofiber = mapping_cone(&smash_map(&a)).homology_table()?;
    let ok = cofiber.iter().all(|e| {
        if e.degree == d as i64 {
            e.group == Invariants::free(2)
        } else {
            e.group.is_trivial()
        }
    }) && cofiber.iter().any(|e| e.degree == d as i64);
    let lattice_map = (0..a.rows()).map(|r| a.row(r).iter().map(|x| i64::try_from(x).expect("small")).collect()).collect();
    Ok(HMapReport { d, lattice_map, cofiber, ok })
}

/// One weight of a projective-space computation.
#[derive(Clone, Debug, Serialize)]
pub struct WeightEntry {
    pub weight: Vec<i64>,
    /// `chain` for an explicit chain computation, `structural` when the
    /// total fiber is certified to vanish by an equivalence edge.
    pub method: String,
    pub homology: Vec<HomologyEntry>,
    pub acyclic: bool,
    pub detail: String,
    pub substitutions: Vec<String>,
}

const SUB_NAT_TO_INT: &str =
    "nonzero weight: the Z-entry is replaced by the weight piece of the chart carrying the weight; N^di(N; j) -> N^di(Z; j) is an equivalence";
const SUB_CIRCLE: &str = "weight zero: N^di(Z; 0) is replaced by the real circle B^sigma Z; the N-chart pieces of weight zero are points";
const SUB_POSITIVE_CONE: &str =
    "nonzero weight in the non-units of a cone: every edge in that direction is an equivalence (shuffle splitting plus the N -> Z weight comparison)";
const SUB_TORUS: &str =
    "weight zero: B^di(M_I; 0) is modeled on underlying chains by the exterior algebra of the unit lattice, edges by exterior powers of the lattice inclusion";
const SUB_BASEPOINT: &str = "weight zero: the base point of every entry splits off a constant cube, whose total fiber vanishes";
const SUB_UNIT_SQUARE: &str = "underlying i^*i_*X is X + X; the two units are the displayed 4x2 matrices tensored with the identity";

fn simplicial_chain_map(x: &TruncSet, y: &TruncSet, f: impl Fn(usize, &[i64]) -> Vec<i64>) -> Result<ChainMap> {
    let (cx, cy) = (normalized_chains(x), normalized_chains(y));
    let q_max = x.q_max().min(y.q_max());
    ChainMap::from_fn(&cx, &cy, |q| {
        let mut m = IntMatrix::zeros(cy.rank(q), cx.rank(q));
        if q < 0 || q as usize > q_max {
            return m;
        }
        let q = q as usize;
        let tgt_nd = y.nondegenerate(q);
        for (c, &k) in x.nondegenerate(q).iter().enumerate() {
            let img = f(q, &x.simplices(q)[k]);
            if let Some(idx) = y.index_of(q, &img) {
                if let Some(r) = tgt_nd.iter().position(|&t| t == idx) {
                    m[(r, c)] = BigInt::one();
                }
            }
        }
        m
    })
}

/// `THR(P^1)` weight by weight from the square of the two charts.
#[derive(Clone, Debug, Serialize)]
pub struct P1Report {
    pub max_weight: i64,
    pub weights: Vec<WeightEntry>,
    pub ok: bool,
}

pub fn p1_report(max_weight: i64) -> Result<P1Report> {
    let mut weights = Vec::new();
    let mut ok = true;
    for j in -max_weight..=max_weight {
        let (chart, sub) = if j == 0 {
            (None, SUB_CIRCLE)
        } else {
            let m = if j > 0 {
                AffineMonoid::natural()
            } else {
                AffineMonoid::with_trivial_involution(1, vec![vec![-1]])?
            };
            (Some(dihedral_nerve_piece(&m, &[vec![j]], j.unsigned_abs() as usize + 2)?), SUB_NAT_TO_INT)
        };
        let (right, bottom, corner, f, g) = match &chart {
            None => {
                let pt = point(3);
                let circle = circle_model_to(3)?;
                let inc = simplicial_chain_map(&pt, &circle, |q, _| vec![0; q])?;
                let c = normalized_chains(&pt);
                (c.clone(), c, normalized_chains(&circle), inc.clone(), inc)
            }
            Some(piece) => {
                let c = normalized_chains(piece);
                let id = ChainMap::identity(&c);
                let zero = ChainComplex::zero();
                let z = ChainMap::zero(&zero, &c);
                if j > 0 {
                    (c.clone(), zero, c, id, z)
                } else {
                    (zero, c.clone(), c, z, id)
                }
            }
        };
        let entries = vec![ChainComplex::zero(), right.clone(), bottom.clone(), corner.clone()];
        let cube = CubeDiagram::new(2, entries, |b, i| match (b, i) {
            (0, 0) => Ok(ChainMap::zero(&ChainComplex::zero(), &right)),
            (0, 1) => Ok(ChainMap::zero(&ChainComplex::zero(), &bottom)),
            (1, 1) => Ok(f.clone()),
            (2, 0) => Ok(g.clone()),
            _ => unreachable!("2-cube edges"),
        })?;
        let homology = punctured_limit(&cube).complex.homology_table()?;
        let acyclic = homology.iter().all(|e| e.group.is_trivial());
        let good = if j == 0 {
            homology.iter().all(|e| if e.degree == 0 { e.group == Invariants::free(2) } else { e.group.is_trivial() })
        } else {
            acyclic
        };
        ok &= good;
        let detail = match j.signum() {
            1 => "N-chart carries the weight; the -N chart is empty".to_string(),
            -1 => "-N-chart carries the weight; the N chart is empty".to_string(),
            _ => "both charts are points over the real circle".to_string(),
        };
        weights.push(WeightEntry { weight: vec![j], method: "chain".into(), homology, acyclic, detail, substitutions: vec![sub.into()] });
    }
    Ok(P1Report { max_weight, weights, ok })
}

/// The square `Q` for the sign-twisted projective line, and the remaining
/// summand square.
#[derive(Clone, Debug, Serialize)]
pub struct PsigmaReport {
    pub right_unit: Vec<Vec<i64>>,
    pub lower_unit: Vec<Vec<i64>>,
    /// Rank of `[right | lower]`; the square is cartesian only at rank 4.
    pub stacked_rank: usize,
    pub tfib: Vec<HomologyEntry>,
    pub q_cartesian: bool,
    pub mutation: MutationReport,
    pub remaining: Vec<SummandReport>,
    pub substitutions: Vec<String>,
    /// `Q` cartesian and the mutant not.
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MutationReport {
    pub entry: (usize, usize),
    pub tfib: Vec<HomologyEntry>,
    pub cartesian: bool,
    /// The mutant's verdict differs from the original's.
    pub verdict_changes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SummandReport {
    pub label: String,
    pub homology: Vec<HomologyEntry>,
}

pub const PSIGMA_RIGHT: [[i64; 2]; 4] = [[1, 0], [1, 0], [0, 1], [0, 1]];
pub const PSIGMA_LOWER: [[i64; 2]; 4] = [[1, 0], [0, 1], [0, 1], [1, 0]];

fn rows_of<const C: usize>(m: &[[i64; C]]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn copies(c: &ChainComplex, k: usize) -> ChainComplex {
    ChainComplex::direct_sum(&vec![c; k])
}

/// `m ⊗ id_c` as a map `c^{cols} -> c^{rows}`.
fn matrix_on_copies(m: &IntMatrix, c: &ChainComplex) -> Result<ChainMap> {
    let (src, tgt) = (copies(c, m.cols()), copies(c, m.rows()));
    ChainMap::from_fn(&src, &tgt, |d| m.kron(&IntMatrix::identity(c.rank(d))))
}

fn corner_square(right: &ChainMap, lower: &ChainMap) -> Result<CubeDiagram> {
    let zero = ChainComplex::zero();
    let entries = vec![zero.clone(), right.source().clone(), lower.source().clone(), right.target().clone()];
    CubeDiagram::new(2, entries, |b, i| match (b, i) {
        (0, 0) => Ok(ChainMap::zero(&zero, right.source())),
        (0, 1) => Ok(ChainMap::zero(&zero, lower.source())),
        (1, 1) => Ok(right.clone()),
        (2, 0) => Ok(lower.clone()),
        _ => unreachable!("2-cube edges"),
    })
}

fn q_square_tfib(right: &IntMatrix, lower: &IntMatrix, circle: &ChainComplex) -> Result<Vec<HomologyEntry>> {
    let cube = corner_square(&matrix_on_copies(right, circle)?, &matrix_on_copies(lower, circle)?)?;
    total_fiber(&cube).complex.homology_table()
}

pub fn psigma_report() -> Result<PsigmaReport> {
    let circle = normalized_chains(&circle_model_to(3)?);
    let right = IntMatrix::from_rows(&rows_of(&PSIGMA_RIGHT));
    let lower = IntMatrix::from_rows(&rows_of(&PSIGMA_LOWER));
    let stacked_rank = snf(&right.hstack(&lower)).rank;
    let tfib = q_square_tfib(&right, &lower, &circle)?;
    let q_cartesian = tfib.iter().all(|e| e.group.is_trivial());

    let entry = (3, 0);
    let mut mutated = lower.clone();
    mutated[entry] = BigInt::one() - &mutated[entry];
    let mtfib = q_square_tfib(&right, &mutated, &circle)?;
    let m_cartesian = mtfib.iter().all(|e| e.group.is_trivial());

    let unit = IntMatrix::from_rows(&[vec![1], vec![1]]);
    let s0 = ChainComplex::concentrated(0, 1);
    let s1 = ChainComplex::concentrated(1, 1);
    let first = corner_square(&ChainMap::identity(&copies(&s0, 2)), &matrix_on_copies(&unit, &s0)?)?;
    let second = corner_square(&ChainMap::zero(&ChainComplex::zero(), &copies(&s1, 2)), &matrix_on_copies(&unit, &s1)?)?;
    let remaining = vec![
        SummandReport { label: "untwisted".into(), homology: punctured_limit(&first).complex.homology_table()? },
        SummandReport {
            label: "weight-sigma twisted (not verified equivariantly)".into(),
            homology: punctured_limit(&second).complex.homology_table()?,
        },
    ];
    Ok(PsigmaReport {
        right_unit: rows_of(&PSIGMA_RIGHT),
        lower_unit: rows_of(&PSIGMA_LOWER),
        stacked_rank,
        tfib,
        q_cartesian,
        mutation: MutationReport { entry, tfib: mtfib, cartesian: m_cartesian, verdict_changes: m_cartesian != q_cartesian },
        remaining,
        substitutions: vec![SUB_UNIT_SQUARE.into()],
        ok: q_cartesian && !m_cartesian,
    })
}

/// Cones of the projective cover: `M_j = {x_j >= 0}` for `j <= n` and
/// `M_{n+1} = {Σx <= 0}`, intersected over a set `I` of indices `1..=n+1`
/// given as a bitmask (bit `j - 1` for index `j`).
#[derive(Clone, Copy, Debug)]
pub struct ProjectiveCones {
    pub n: usize,
}

impl ProjectiveCones {
    /// Constraint rows `c` with `M_I = {x : c·x >= 0 for all rows}`.
    pub fn constraints(&self, set: usize) -> Vec<Vec<i64>> {
        let n = self.n;
        let mut rows = Vec::new();
        for j in 0..n {
            if set >> j & 1 == 1 {
                rows.push((0..n).map(|k| i64::from(k == j)).collect());
            }
        }
        if set >> n & 1 == 1 {
            rows.push(vec![-1; n]);
        }
        rows
    }

    pub fn contains(&self, set: usize, v: &[i64]) -> bool {
        self.constraints(set).iter().all(|c| c.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() >= 0)
    }

    /// `v` is a non-unit of the single cone `M_j` (1-based).
    pub fn is_nonunit(&self, j: usize, v: &[i64]) -> bool {
        let c = &self.constraints(1 << (j - 1))[0];
        c.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() > 0
    }

    /// Basis (columns) of the unit lattice of `M_I`.
    pub fn unit_lattice(&self, set: usize) -> IntMatrix {
        let rows = self.constraints(set);
        if rows.is_empty() {
            return IntMatrix::identity(self.n);
        }
        kernel_basis(&IntMatrix::from_rows(&rows))
    }

    /// Index set of cube vertex `b`: the coordinates where `b` is 0.
    pub fn index_set(&self, b: usize) -> usize {
        !b & ((1 << (self.n + 1)) - 1)
    }

    /// Cube of weight-zero torus models, full or reduced.
    pub fn weight_zero_cube(&self, reduced: bool) -> Result<CubeDiagram> {
        let dim = self.n + 1;
        let lattices: Vec<IntMatrix> = (0..1usize << dim).map(|b| self.unit_lattice(self.index_set(b))).collect();
        let model = |r: usize| if reduced { reduced_torus_complex(r) } else { torus_complex(r) };
        let entries = lattices.iter().map(|l| model(l.cols())).collect();
        CubeDiagram::new(dim, entries, |b, i| {
            let (src, tgt) = (&lattices[b], &lattices[b | 1 << i]);
            let res = snf(tgt);
            let cols: Vec<Vec<BigInt>> = (0..src.cols())
                .map(|c| solve_with(&res, &src.col(c)).ok_or_else(|| Error::Internal("unit lattices are not nested".into())))
                .collect::<Result<_>>()?;
            let a = IntMatrix::from_columns(&cols, tgt.cols());
            Ok(if reduced { reduced_torus_map(&a) } else { torus_map(&a) })
        })
    }
}

/// Direct chain computation of a finite entry `B^di(M_I; v)` for a pointed
/// simplicial cone, against the torus predicted by its cone coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct SpotCheck {
    pub weight: Vec<i64>,
    pub cone: Vec<usize>,
    pub cone_coordinates: Vec<i64>,
    pub homology: Vec<HomologyEntry>,
    pub expected_circles: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub d: usize,
    pub tfib: Vec<HomologyEntry>,
    pub expected_rank: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroWeightReport {
    pub full_limit: Vec<HomologyEntry>,
    pub basepoint_tfib_acyclic: bool,
    pub reduced_tfib: Vec<HomologyEntry>,
    pub assembled_h0_rank: usize,
    pub expected_h0_rank: usize,
    pub parity_count: String,
    pub stages: Vec<StageReport>,
    pub recursion: Vec<RecursionReport>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PnReport {
    pub n: usize,
    pub window: i64,
    pub nonzero_weights: Vec<WeightEntry>,
    pub all_nonzero_acyclic: bool,
    pub spot_checks: Vec<SpotCheck>,
    pub weight_zero: WeightEntry,
    pub zero_detail: ZeroWeightReport,
    pub h_maps: Vec<HMapReport>,
    pub ok: bool,
}

fn weights_in_box(n: usize, w: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (-w..=w).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn spot_check(cones: &ProjectiveCones, v: &[i64]) -> Result<Vec<SpotCheck>> {
    let n = cones.n;
    let full = (1usize << (n + 1)) - 1;
    let mut out = Vec::new();
    for set in 1..full {
        let rows = cones.constraints(set);
        if rows.len() != n || !cones.contains(set, v) || cones.unit_lattice(set).cols() != 0 {
            continue;
        }
        let c = IntMatrix::from_rows(&rows);
        let res = snf(&c);
        let gens: Vec<Vec<i64>> = (0..n)
            .map(|k| {
                let e: Vec<BigInt> = (0..n).map(|r| BigInt::from(i64::from(r == k))).collect();
                solve_with(&res, &e)
                    .ok_or_else(|| Error::Internal("cone constraints are not unimodular".into()))
                    .map(|x| x.iter().map(|y| i64::try_from(y).expect("small")).collect())
            })
            .collect::<Result<_>>()?;
        let monoid = AffineMonoid::with_trivial_involution(n, gens)?;
        let coords: Vec<i64> = rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
        let total: i64 = coords.iter().sum();
        let piece = dihedral_nerve_piece(&monoid, &[v.to_vec()], total as usize + 1)?;
        let homology = normalized_chains(&piece).homology_table()?;
        let circles = coords.iter().filter(|&&y| y > 0).count();
        let ok = homology.iter().all(|e| {
            let expect = if e.degree >= 0 { subsets(circles, e.degree as usize).len() } else { 0 };
            e.group == Invariants::free(expect)
        }) && homology.iter().any(|e| e.degree == circles as i64);
        let cone = (0..=n).filter(|j| set >> j & 1 == 1).map(|j| j + 1).collect();
        out.push(SpotCheck { weight: v.to_vec(), cone, cone_coordinates: coords, homology, expected_circles: circles, ok });
    }
    Ok(out)
}

fn only_degree(table: &[HomologyEntry], degree: i64, rank: usize) -> bool {
    table.iter().all(|e| if e.degree == degree { e.group == Invariants::free(rank) } else { e.group.is_trivial() })
        && (rank == 0 || table.iter().any(|e| e.degree == degree))
}

/// `THR(P^n)` on underlying chains: every nonzero weight with
/// `‖v‖∞ <= window` is certified acyclic, and weight zero is assembled from
/// the cube of torus models.
pub fn pn_report(n: usize, window: i64, spot: &[Vec<i64>]) -> Result<PnReport> {
    if n == 0 {
        return Err(Error::OutOfRange("projective space needs n >= 1".into()));
    }
    let cones = ProjectiveCones { n };
    let dim = n + 1;
    let mut nonzero_weights = Vec::new();
    let mut all_nonzero_acyclic = true;
    for v in weights_in_box(n, window) {
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let Some(j) = (1..=dim).find(|&j| cones.is_nonunit(j, &v)) else {
            all_nonzero_acyclic = false;
            nonzero_weights.push(WeightEntry {
                weight: v,
                method: "structural".into(),
                homology: Vec::new(),
                acyclic: false,
                detail: "no cone has this weight as a non-unit".into(),
                substitutions: Vec::new(),
            });
            continue;
        };
        // Along direction j, source and target are present or empty together.
        let bit = 1 << (j - 1);
        let consistent = (0..1usize << dim)
            .filter(|b| b & bit == 0)
            .all(|b| cones.contains(cones.index_set(b), &v) == cones.contains(cones.index_set(b | bit), &v));
        all_nonzero_acyclic &= consistent;
        nonzero_weights.push(WeightEntry {
            weight: v,
            method: "structural".into(),
            homology: Vec::new(),
            acyclic: consistent,
            detail: format!("non-unit of cone {j}; every edge in direction {j} is an equivalence"),
            substitutions: vec![SUB_POSITIVE_CONE.into()],
        });
    }
    let mut spot_checks = Vec::new();
    for v in spot {
        if v.len() != n {
            return Err(Error::Shape(format!("spot weight {v:?} does not have {n} coordinates")));
        }
        spot_checks.extend(spot_check(&cones, v)?);
    }

    let full = cones.weight_zero_cube(false)?;
    let full_limit = punctured_limit(&full).complex.homology_table()?;
    let basepoint = CubeDiagram::constant(&ChainComplex::concentrated(0, 1), dim);
    let basepoint_tfib_acyclic = total_fiber(&basepoint).complex.is_acyclic()?;
    let reduced = cones.weight_zero_cube(true)?;
    let reduced_tfib = total_fiber(&reduced).complex.homology_table()?;
    let shifted_rank = reduced_tfib.iter().find(|e| e.degree == -1).map_or(0, |e| e.group.free_rank);
    let assembled_h0_rank = 1 + shifted_rank;
    let parity_count = if n.is_multiple_of(2) {
        format!("1 + 2*{} = {}", n / 2, 1 + n)
    } else {
        format!("1 + 2*{} + 1 = {}", n / 2, 1 + n)
    };
    let mut stages = Vec::new();
    for d in 0..=n {
        let sub = reduced.restrict(&(0..=d).collect::<Vec<_>>());
        let tfib = total_fiber(&sub).complex.homology_table()?;
        let ok = only_degree(&tfib, -1, d);
        stages.push(StageReport { d, tfib, expected_rank: d, ok });
    }
    let recursion = (0..dim).map(|i| tfib_recursion_check(&reduced, i)).collect::<Result<Vec<_>>>()?;
    let zero_ok = only_degree(&full_limit, 0, n + 1)
        && basepoint_tfib_acyclic
        && only_degree(&reduced_tfib, -1, n)
        && assembled_h0_rank == n + 1
        && stages.iter().all(|s| s.ok)
        && recursion.iter().all(|r| r.ok);
    let h_maps = (1..=n).map(h_map_cofiber_check).collect::<Result<Vec<_>>>()?;
    let ok = all_nonzero_acyclic && spot_checks.iter().all(|s| s.ok) && zero_ok && h_maps.iter().all(|h| h.ok);
    Ok(PnReport {
        n,
        window,
        nonzero_weights,
        all_nonzero_acyclic,
        spot_checks,
        weight_zero: WeightEntry {
            weight: vec![0; n],
            method: "chain".into(),
            homology: full_limit.clone(),
            acyclic: false,
            detail: format!("assembled H_0 rank {assembled_h0_rank}, expected {}", n + 1),
            substitutions: vec![SUB_TORUS.into(), SUB_BASEPOINT.into()],
        },
        zero_detail: ZeroWeightReport {
            full_limit,
            basepoint_tfib_acyclic,
            reduced_tfib,
            assembled_h0_rank,
            expected_h0_rank: n + 1,
            parity_count,
            stages,
            recursion,
            ok: zero_ok,
        },
        h_maps,
        ok,
    })
}

/// Default spot weight `(1, 0, ..., 0, -2)`.
pub fn default_spot_weight(n: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[0] = 1;
    if n > 1 {
        v[n - 1] = -2;
    } else {
        v[0] = 2;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scalar(c: &ChainComplex, k: i64) -> ChainMap {
        ChainMap::from_fn(c, c, |d| IntMatrix::identity(c.rank(d)).scale(&BigInt::from(k))).unwrap()
    }

    fn ranks(t: &[HomologyEntry]) -> Vec<(i64, String)> {
        t.iter().filter(|e| !e.group.is_trivial()).map(|e| (e.degree, e.display.clone())).collect()
    }

    #[test]
    fn one_cube_total_fiber_is_the_mapping_fiber() {
        let c = ChainComplex::concentrated(0, 1);
        let f = scalar(&c, 3);
        let t = total_fiber(&CubeDiagram::from_map(&f)).complex;
        assert_eq!(ranks(&t.homology_table().unwrap()), vec![(-1, "Z/3".to_string())]);
    }

    #[test]
    fn pullback_square() {
        // Z -> Z^2 <- Z through the same coordinate: kernel and cokernel of rank one.
        let z = ChainComplex::concentrated(0, 1);
        let z2 = ChainComplex::concentrated(0, 2);
        let f = ChainMap::from_fn(&z, &z2, |_| IntMatrix::from_rows(&[vec![1], vec![0]])).unwrap();
        let g = f.clone();
        let zero = ChainComplex::zero();
        let cube = CubeDiagram::new(2, vec![zero.clone(), z.clone(), z.clone(), z2.clone()], |b, i| match (b, i) {
            (0, _) => Ok(ChainMap::zero(&zero, &z)),
            (1, 1) => Ok(f.clone()),
            _ => Ok(g.clone()),
        })
        .unwrap();
        let lim = punctured_limit(&cube).complex.homology_table().unwrap();
        assert_eq!(ranks(&lim), vec![(-1, "Z".to_string()), (0, "Z".to_string())]);
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let z = ChainComplex::concentrated(0, 1);
        let r = CubeDiagram::new(2, vec![z.clone(); 4], |b, i| Ok(scalar(&z, if (b, i) == (0, 0) { 2 } else { 1 })));
        assert!(matches!(r, Err(Error::IllDefined(_))));
    }

    #[test]
    fn faces_and_restriction() {
        let c = ChainComplex::concentrated(0, 1);
        let cube = CubeDiagram::tensor_of_maps(&[scalar(&c, 2), scalar(&c, 3), scalar(&c, 5)]).unwrap();
        let f = cube.face(1, true);
        assert_eq!(f.dim(), 2);
        assert_eq!(f.edge(0, 1).at(0), IntMatrix::from_rows(&[vec![5]]));
        let r = cube.restrict(&[2]);
        assert_eq!(r.edge(0, 0).at(0), IntMatrix::from_rows(&[vec![5]]));
    }

    #[test]
    fn recursion_on_scalar_cubes() {
        let c = ChainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])], None).unwrap();
        let cube = CubeDiagram::tensor_of_maps(&[scalar(&c, 3), scalar(&c, 1), scalar(&c, 0)]).unwrap();
        for i in 0..3 {
            let r = tfib_recursion_check(&cube, i).unwrap();
            assert!(r.ok, "direction {i}: {r:?}");
        }
    }

    #[test]
    fn smash_of_fibers() {
        let c = ChainComplex::concentrated(0, 1);
        let r = smash_cube_check(&[scalar(&c, 2), scalar(&c, 3)]).unwrap();
        assert!(r.ok);
        let r = smash_cube_check(&[scalar(&c, 2), scalar(&c, 2), scalar(&c, 0)]).unwrap();
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn exterior_powers() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(exterior_power(&a, 2), IntMatrix::from_rows(&[vec![-2]]));
        assert_eq!(exterior_power(&a, 0), IntMatrix::from_rows(&[vec![1]]));
        let t = torus_complex(3);
        assert_eq!((0..=3).map(|q| t.rank(q)).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn h_maps_give_two_spheres() {
        for d in 1..=4 {
            let r = h_map_cofiber_check(d).unwrap();
            assert!(r.ok, "d = {d}: {r:?}");
        }
    }

    #[test]
    fn projective_line() {
        let r = p1_report(4).unwrap();
        assert!(r.ok);
        let zero = r.weights.iter().find(|w| w.weight == vec![0]).unwrap();
        assert_eq!(ranks(&zero.homology), vec![(0, "Z^2".to_string())]);
    }

    #[test]
    fn psigma_square_has_rank_three() {
        let r = psigma_report().unwrap();
        assert_eq!(r.stacked_rank, 3);
        assert!(!r.q_cartesian);
        // One-dimensional kernel and cokernel, each tensored with chains on the circle.
        assert_eq!(ranks(&r.tfib), vec![(-2, "Z".to_string()), (-1, "Z^2".to_string()), (0, "Z".to_string())]);
        for s in &r.remaining {
            assert_eq!(ranks(&s.homology), vec![(0, "Z".to_string())]);
        }
        assert!(r.mutation.cartesian && r.mutation.verdict_changes);
        assert!(!r.ok);
    }

    #[test]
    fn pn_one_matches_the_line() {
        let r = pn_report(1, 3, &[]).unwrap();
        assert!(r.ok, "{:?}", r.zero_detail);
        assert_eq!(ranks(&r.zero_detail.full_limit), vec![(0, "Z^2".to_string())]);
    }

    #[test]
    fn pn_two_and_three() {
        for n in 2..=3 {
            let r = pn_report(n, 2, &[default_spot_weight(n)]).unwrap();
            assert!(r.ok, "n = {n}: {:?} {:?}", r.zero_detail, r.spot_checks);
            assert_eq!(r.zero_detail.assembled_h0_rank, n + 1);
            assert!(!r.spot_checks.is_empty());
        }
    }

    #[test]
    fn cone_membership() {
        let c = ProjectiveCones { n: 3 };
        let v = [1, 0, -2];
        assert!(c.is_nonunit(1, &v));
        assert!(c.is_nonunit(4, &v));
        assert!(!c.is_nonunit(2, &v));
        assert_eq!(c.unit_lattice(0).cols(), 3);
        assert_eq!(c.unit_lattice(0b1000).cols(), 2);
        assert_eq!(c.unit_lattice(0b1011).cols(), 0);
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
            let rs: Vec<Vec<i64>> = v.chunks(cols.max(1)).take(rows).map(|c| c[..cols].to_vec()).collect();
            IntMatrix::from_rows_with_cols(&rs, cols)
        })
    }

    proptest! {
        #[test]
        fn exterior_power_is_functorial(a in small_matrix(3, 3), b in small_matrix(3, 2), q in 0usize..=2) {
            let ab = a.mul(&b);
            prop_assert_eq!(exterior_power(&ab, q), exterior_power(&a, q).mul(&exterior_power(&b, q)));
        }

        #[test]
        fn identity_direction_kills_tfib(k in -3i64..=3, l in -3i64..=3, d in 0usize..2) {
            let c = ChainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(&[vec![2]])], None).unwrap();
            let mut maps = vec![scalar(&c, k), scalar(&c, l)];
            maps.insert(d, ChainMap::identity(&c));
            let cube = CubeDiagram::tensor_of_maps(&maps).unwrap();
            prop_assert!(total_fiber(&cube).complex.is_acyclic().unwrap());
        }
    }
}
