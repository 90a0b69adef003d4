use std::collections::BTreeSet;

use serde::Serialize;

use super::trunc::{Formulas, Simplex, TruncSet};
use crate::error::{Error, Result};
use crate::involutive_algebra::{AffineMonoid, WeightMap};

/// Splits a flat tuple into monoid entries of width `rank`.
fn blocks(x: &[i64], rank: usize) -> Vec<&[i64]> {
    if rank == 0 {
        return Vec::new();
    }
    x.chunks(rank).collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Number of monoid entries of a degree-`q` dihedral simplex, accounting for
/// the rank-0 monoid where tuples are empty.
fn entries(x: &[i64], rank: usize, q: usize) -> Vec<Vec<i64>> {
    if rank == 0 {
        vec![Vec::new(); q + 1]
    } else {
        blocks(x, rank).into_iter().map(<[i64]>::to_vec).collect()
    }
}

fn flatten(parts: Vec<Vec<i64>>) -> Simplex {
    parts.into_iter().flatten().collect()
}

// Cyclic bar construction formulas on (x_0, ..., x_q).

fn di_face(rank: usize, q: usize, i: usize, x: &[i64]) -> Simplex {
    let mut e = entries(x, rank, q);
    if i < q {
        let merged = add(&e[i], &e[i + 1]);
        e[i] = merged;
        e.remove(i + 1);
    } else {
        let last = e.pop().expect("positive degree");
        e[0] = add(&last, &e[0]);
    }
    flatten(e)
}

fn di_degeneracy(rank: usize, q: usize, i: usize, x: &[i64]) -> Simplex {
    let mut e = entries(x, rank, q);
    e.insert(i + 1, vec![0; rank]);
    flatten(e)
}

fn di_rotation(rank: usize, q: usize, x: &[i64]) -> Simplex {
    let mut e = entries(x, rank, q);
    e.rotate_right(1);
    flatten(e)
}

fn di_involution(m: &AffineMonoid, q: usize, x: &[i64]) -> Simplex {
    let e = entries(x, m.rank(), q);
    let mut out = vec![m.apply_involution(&e[0])];
    out.extend(e[1..].iter().rev().map(|v| m.apply_involution(v)));
    flatten(out)
}

// Bar construction formulas on (x_1, ..., x_q).

fn real_face(rank: usize, q: usize, i: usize, x: &[i64]) -> Simplex {
    let mut e: Vec<Vec<i64>> = if rank == 0 { vec![Vec::new(); q] } else { blocks(x, rank).into_iter().map(<[i64]>::to_vec).collect() };
    if i == 0 {
        e.remove(0);
    } else if i == q {
        e.pop();
    } else {
        let merged = add(&e[i - 1], &e[i]);
        e[i - 1] = merged;
        e.remove(i);
    }
    flatten(e)
}

fn real_degeneracy(rank: usize, q: usize, i: usize, x: &[i64]) -> Simplex {
    let mut e: Vec<Vec<i64>> = if rank == 0 { vec![Vec::new(); q] } else { blocks(x, rank).into_iter().map(<[i64]>::to_vec).collect() };
    e.insert(i, vec![0; rank]);
    flatten(e)
}

fn real_involution(m: &AffineMonoid, x: &[i64]) -> Simplex {
    let e = blocks(x, m.rank());
    flatten(e.iter().rev().map(|v| m.apply_involution(v)).collect())
}

fn check_orbit(m: &AffineMonoid, orbit: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    if orbit.is_empty() {
        return Err(Error::Shape("weight set must be nonempty".into()));
    }
    let set: BTreeSet<Vec<i64>> = orbit.iter().cloned().collect();
    for v in &set {
        if v.len() != m.rank() {
            return Err(Error::Shape(format!("weight {v:?} does not have rank {}", m.rank())));
        }
        if !set.contains(&m.apply_involution(v)) {
            return Err(Error::Shape(format!("weight set is not closed under the involution at {v:?}")));
        }
    }
    Ok(set.into_iter().collect())
}

fn grading_bound(m: &AffineMonoid, orbit: &[Vec<i64>]) -> Option<usize> {
    if m.generators().iter().all(|g| g.iter().all(|&c| c == 0)) {
        return Some(0);
    }
    let lam = m.grading()?;
    let min_cost = m
        .generators()
        .iter()
        .filter(|g| g.iter().any(|&c| c != 0))
        .map(|g| g.iter().zip(&lam).map(|(a, b)| a * b).sum::<i64>())
        .min()?;
    if min_cost < 1 {
        return None;
    }
    orbit
        .iter()
        .map(|v| v.iter().zip(&lam).map(|(a, b)| a * b).sum::<i64>().max(0) / min_cost)
        .max()
        .map(|b| b as usize)
}

/// The weight piece `N^di(M; I)` of the dihedral nerve, truncated at `q_max`:
/// tuples `(x_0, ..., x_q)` with `x_0 + ... + x_q` in the involution-closed
/// set `I`, with all faces, degeneracies, rotations and the involution.
///
/// Fails with [`Error::Infinite`] when a weight fiber is not provably finite.
pub fn dihedral_nerve_piece(m: &AffineMonoid, orbit: &[Vec<i64>], q_max: usize) -> Result<TruncSet> {
    let orbit = check_orbit(m, orbit)?;
    let rank = m.rank();
    let mut simplices = Vec::with_capacity(q_max + 1);
    for q in 0..=q_max {
        let power = m.power(q + 1);
        let wm = WeightMap::block_sum(rank, q + 1);
        let mut level = Vec::new();
        for v in &orbit {
            if rank == 0 {
                level.push(Vec::new());
            } else {
                level.extend(power.elements_of_weight(&wm, v)?.into_iter().map(|e| e.vector));
            }
        }
        simplices.push(level);
    }
    let face = move |q: usize, i: usize, x: &[i64]| di_face(rank, q, i, x);
    let degen = move |q: usize, i: usize, x: &[i64]| di_degeneracy(rank, q, i, x);
    let rot = move |q: usize, x: &[i64]| di_rotation(rank, q, x);
    let inv = |q: usize, x: &[i64]| di_involution(m, q, x);
    let formulas = Formulas { face: &face, degeneracy: &degen, rotation: Some(&rot), involution: Some(&inv) };
    let label = format!("N^di(M;{})", fmt_orbit(&orbit));
    let x = TruncSet::from_formulas(label, simplices, &formulas, grading_bound(m, &orbit))?;
    x.check_nondeg_bound()?;
    Ok(x)
}

fn fmt_orbit(orbit: &[Vec<i64>]) -> String {
    let parts: Vec<String> = orbit
        .iter()
        .map(|v| if v.len() == 1 { v[0].to_string() } else { format!("{v:?}") })
        .collect();
    format!("{{{}}}", parts.join(","))
}

fn require_signed_permutation(m: &AffineMonoid) -> Result<()> {
    let ok = m.involution_matrix().iter().all(|row| {
        row.iter().filter(|&&c| c != 0).count() == 1 && row.iter().all(|&c| c.abs() <= 1)
    });
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported("windowed nerves need an involution permuting coordinates up to sign".into()))
    }
}

/// Sequences `(y_1, ..., y_len)` of elements from `pool` whose coordinatewise
/// absolute sums stay within `window`.
fn window_sequences(pool: &[Vec<i64>], rank: usize, len: usize, window: i64) -> Vec<Vec<Vec<i64>>> {
    fn rec(pool: &[Vec<i64>], budget: &mut Vec<i64>, len: usize, cur: &mut Vec<Vec<i64>>, out: &mut Vec<Vec<Vec<i64>>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for y in pool {
            if y.iter().zip(budget.iter()).all(|(c, b)| c.abs() <= *b) {
                y.iter().zip(budget.iter_mut()).for_each(|(c, b)| *b -= c.abs());
                cur.push(y.clone());
                rec(pool, budget, len, cur, out);
                cur.pop();
                y.iter().zip(budget.iter_mut()).for_each(|(c, b)| *b += c.abs());
            }
        }
    }
    let mut out = Vec::new();
    rec(pool, &mut vec![window; rank], len, &mut Vec::new(), &mut out);
    out
}

/// Windowed weight piece: dihedral simplices `(x_0, ..., x_q)` summing into
/// `I` whose entries `x_1, ..., x_q` have coordinatewise absolute sums at most
/// `window`. The window is closed under faces, degeneracies and the involution
/// but not under rotation, so the result is a real simplicial set.
pub fn dihedral_nerve_piece_windowed(m: &AffineMonoid, orbit: &[Vec<i64>], q_max: usize, window: i64) -> Result<TruncSet> {
    let orbit = check_orbit(m, orbit)?;
    require_signed_permutation(m)?;
    if window < 0 {
        return Err(Error::Shape("window must be nonnegative".into()));
    }
    let rank = m.rank();
    let pool: Vec<Vec<i64>> = m.elements_in_box(-window, window).into_iter().map(|e| e.vector).collect();
    let mut simplices = Vec::with_capacity(q_max + 1);
    for q in 0..=q_max {
        let mut level = Vec::new();
        for tail in window_sequences(&pool, rank, q, window) {
            let total = tail.iter().fold(vec![0; rank], |acc, y| add(&acc, y));
            for v in &orbit {
                let x0 = sub(v, &total);
                if m.member(&x0).is_some() {
                    let mut parts = vec![x0];
                    parts.extend(tail.iter().cloned());
                    level.push(flatten(parts));
                }
            }
        }
        simplices.push(level);
    }
    let face = move |q: usize, i: usize, x: &[i64]| di_face(rank, q, i, x);
    let degen = move |q: usize, i: usize, x: &[i64]| di_degeneracy(rank, q, i, x);
    let inv = |q: usize, x: &[i64]| di_involution(m, q, x);
    let formulas = Formulas { face: &face, degeneracy: &degen, rotation: None, involution: Some(&inv) };
    let label = format!("N^di(M;{})[window {window}]", fmt_orbit(&orbit));
    let x = TruncSet::from_formulas(label, simplices, &formulas, Some(rank * window as usize))?;
    x.check_nondeg_bound()?;
    Ok(x)
}

/// The real nerve `N^sigma M` truncated at `q_max`: tuples `(x_1, ..., x_q)` with
/// `w(x_1, ..., x_q) = (sigma x_q, ..., sigma x_1)`. Unless `M` is trivial, a
/// window bounding the coordinatewise absolute sums of the entries is required.
pub fn real_nerve(m: &AffineMonoid, q_max: usize, window: Option<i64>) -> Result<TruncSet> {
    let rank = m.rank();
    let trivial = m.generators().iter().all(|g| g.iter().all(|&c| c == 0));
    let (pool, window) = if trivial {
        (vec![vec![0; rank]], 0)
    } else {
        let w = window.ok_or_else(|| Error::Infinite("the nerve of a nontrivial monoid needs a window".into()))?;
        require_signed_permutation(m)?;
        if w < 0 {
            return Err(Error::Shape("window must be nonnegative".into()));
        }
        (m.elements_in_box(-w, w).into_iter().map(|e| e.vector).collect(), w)
    };
    let simplices: Vec<Vec<Simplex>> = (0..=q_max)
        .map(|q| window_sequences(&pool, rank, q, window).into_iter().map(flatten).collect())
        .collect();
    let face = move |q: usize, i: usize, x: &[i64]| real_face(rank, q, i, x);
    let degen = move |q: usize, i: usize, x: &[i64]| real_degeneracy(rank, q, i, x);
    let inv = |_q: usize, x: &[i64]| real_involution(m, x);
    let formulas = Formulas { face: &face, degeneracy: &degen, rotation: None, involution: Some(&inv) };
    let label = if trivial { "N^sigma(M)".to_string() } else { format!("N^sigma(M)[window {window}]") };
    let x = TruncSet::from_formulas(label, simplices, &formulas, Some(rank * window as usize))?;
    x.check_nondeg_bound()?;
    Ok(x)
}

/// The real simplicial circle `Delta^1 / boundary` truncated at `q_max`,
/// realized as the real nerve of `N` with total weight at most 1.
pub fn circle_model_to(q_max: usize) -> Result<TruncSet> {
    Ok(real_nerve(&AffineMonoid::natural(), q_max, Some(1))?.with_label("S^sigma"))
}

/// [`circle_model_to`] at depth 3.
pub fn circle_model() -> TruncSet {
    circle_model_to(3).expect("the circle model is finite")
}

/// A point with every structure present.
pub fn point(q_max: usize) -> TruncSet {
    dihedral_nerve_piece(&AffineMonoid::trivial(), &[Vec::new()], q_max).expect("the point is finite").with_label("pt")
}

/// The constant real simplicial set on a finite set of integers with the
/// involution `a -> sigma(a)`.
pub fn constant_real_set(elements: &[i64], sigma: &dyn Fn(i64) -> i64, q_max: usize) -> Result<TruncSet> {
    let simplices = vec![elements.iter().map(|&a| vec![a]).collect::<Vec<_>>(); q_max + 1];
    let face = |_q: usize, _i: usize, x: &[i64]| x.to_vec();
    let inv = |_q: usize, x: &[i64]| vec![sigma(x[0])];
    let formulas = Formulas { face: &face, degeneracy: &face, rotation: None, involution: Some(&inv) };
    TruncSet::from_formulas(format!("{elements:?}"), simplices, &formulas, Some(0))
}

/// Degreewise product. A simplex is stored as `a`, a separator, then `b`;
/// use [`product_simplex`] to address it.
pub fn product(x: &TruncSet, y: &TruncSet) -> Result<TruncSet> {
    if x.q_max() != y.q_max() {
        return Err(Error::Shape("products need equal truncation depth".into()));
    }
    let q_max = x.q_max();
    let simplices: Vec<Vec<Simplex>> = (0..=q_max)
        .map(|q| {
            let mut level = Vec::with_capacity(x.count(q) * y.count(q));
            for a in x.simplices(q) {
                for b in y.simplices(q) {
                    let mut s = a.clone();
                    s.push(i64::MIN);
                    s.extend_from_slice(b);
                    level.push(s);
                }
            }
            level
        })
        .collect();
    // Structure maps are looked up through the factors; the separator keeps
    // the concatenated tuples unambiguous.
    let split = |q: usize, s: &[i64]| -> (usize, usize) {
        let p = s.iter().position(|&c| c == i64::MIN).expect("separator");
        (x.index_of(q, &s[..p]).expect("factor simplex"), y.index_of(q, &s[p + 1..]).expect("factor simplex"))
    };
    let join = |q: usize, a: usize, b: usize| -> Simplex {
        let mut s = x.simplices(q)[a].clone();
        s.push(i64::MIN);
        s.extend_from_slice(&y.simplices(q)[b]);
        s
    };
    let face = |q: usize, i: usize, s: &[i64]| {
        let (a, b) = split(q, s);
        join(q - 1, x.face(q, a, i), y.face(q, b, i))
    };
    let degen = |q: usize, i: usize, s: &[i64]| {
        let (a, b) = split(q, s);
        join(q + 1, x.degeneracy(q, a, i), y.degeneracy(q, b, i))
    };
    let rot = |q: usize, s: &[i64]| {
        let (a, b) = split(q, s);
        join(q, x.rotation(q, a).expect("rotation"), y.rotation(q, b).expect("rotation"))
    };
    let inv = |q: usize, s: &[i64]| {
        let (a, b) = split(q, s);
        join(q, x.involution(q, a).expect("involution"), y.involution(q, b).expect("involution"))
    };
    let formulas = Formulas {
        face: &face,
        degeneracy: &degen,
        rotation: if x.has_rotation() && y.has_rotation() { Some(&rot) } else { None },
        involution: if x.has_involution() && y.has_involution() { Some(&inv) } else { None },
    };
    let bound = match (x.nondeg_bound(), y.nondeg_bound()) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    TruncSet::from_formulas(format!("{} x {}", x.label(), y.label()), simplices, &formulas, bound)
}

/// The stored form of the product simplex `(a, b)`.
pub fn product_simplex(a: &[i64], b: &[i64]) -> Simplex {
    let mut s = a.to_vec();
    s.push(i64::MIN);
    s.extend_from_slice(b);
    s
}

/// Per-degree outcome of a candidate isomorphism.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DegreeWitness {
    pub degree: usize,
    pub source: usize,
    pub target: usize,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IsoWitness {
    pub label: String,
    pub degrees: Vec<DegreeWitness>,
    pub bijective: bool,
    pub compatible: bool,
    pub first_failure: Option<String>,
    pub ok: bool,
}

/// Checks that `map[q][k]` (target index of source simplex `k`) is a bijection
/// in every degree commuting with faces, degeneracies and, where both sides
/// have them, rotations and involutions.
pub fn check_iso(label: impl Into<String>, src: &TruncSet, tgt: &TruncSet, map: &[Vec<Option<usize>>]) -> IsoWitness {
    let mut degrees = Vec::new();
    let mut failure: Option<String> = None;
    let mut fail = |msg: String| {
        if failure.is_none() {
            failure = Some(msg);
        }
    };
    for q in 0..=src.q_max().min(tgt.q_max()) {
        let mut hit = vec![false; tgt.count(q)];
        let mut injective = true;
        for (k, t) in map[q].iter().enumerate() {
            match t {
                Some(t) if hit[*t] => injective = false,
                Some(t) => hit[*t] = true,
                None => {
                    injective = false;
                    fail(format!("degree {q}: {:?} has no image", src.simplices(q)[k]));
                }
            }
        }
        let surjective = hit.iter().all(|&h| h);
        if !injective || !surjective {
            fail(format!("degree {q}: not bijective"));
        }
        degrees.push(DegreeWitness { degree: q, source: src.count(q), target: tgt.count(q), injective, surjective });
    }
    let bijective = degrees.iter().all(|d| d.injective && d.surjective);
    let mut compatible = true;
    if bijective {
        let q_top = src.q_max().min(tgt.q_max());
        for q in 0..=q_top {
            for k in 0..src.count(q) {
                let fk = map[q][k].expect("bijective");
                let simplex = || format!("{:?}", src.simplices(q)[k]);
                if q > 0 {
                    for i in 0..=q {
                        if map[q - 1][src.face(q, k, i)] != Some(tgt.face(q, fk, i)) {
                            compatible = false;
                            fail(format!("d_{i} at {}", simplex()));
                        }
                    }
                }
                if q < q_top {
                    for i in 0..=q {
                        if map[q + 1][src.degeneracy(q, k, i)] != Some(tgt.degeneracy(q, fk, i)) {
                            compatible = false;
                            fail(format!("s_{i} at {}", simplex()));
                        }
                    }
                }
                if let (Some(a), Some(b)) = (src.rotation(q, k), tgt.rotation(q, fk)) {
                    if map[q][a] != Some(b) {
                        compatible = false;
                        fail(format!("t at {}", simplex()));
                    }
                }
                if let (Some(a), Some(b)) = (src.involution(q, k), tgt.involution(q, fk)) {
                    if map[q][a] != Some(b) {
                        compatible = false;
                        fail(format!("w at {}", simplex()));
                    }
                }
            }
        }
    }
    IsoWitness { label: label.into(), degrees, bijective, compatible: bijective && compatible, ok: bijective && compatible, first_failure: failure }
}

/// Shuffle map `N^di(M x L; I x J) -> N^di(M; I) x N^di(L; J)` sending
/// `((m_0, l_0), ..., (m_q, l_q))` to `((m_0, ..., m_q), (l_0, ..., l_q))`.
/// With a window, the windowed pieces are compared as real simplicial sets.
pub fn shuffle_iso_check(
    m: &AffineMonoid,
    l: &AffineMonoid,
    orbit_m: &[Vec<i64>],
    orbit_l: &[Vec<i64>],
    q_max: usize,
    window: Option<i64>,
) -> Result<IsoWitness> {
    let ml = m.product(l);
    let orbit: Vec<Vec<i64>> = orbit_m
        .iter()
        .flat_map(|a| orbit_l.iter().map(move |b| a.iter().chain(b).copied().collect()))
        .collect();
    let piece = |mon: &AffineMonoid, o: &[Vec<i64>]| match window {
        Some(w) => dihedral_nerve_piece_windowed(mon, o, q_max, w),
        None => dihedral_nerve_piece(mon, o, q_max),
    };
    let src = piece(&ml, &orbit)?;
    let a = piece(m, orbit_m)?;
    let b = piece(l, orbit_l)?;
    let tgt = product(&a, &b)?;
    let (rm, rl) = (m.rank(), l.rank());
    let map: Vec<Vec<Option<usize>>> = (0..=q_max)
        .map(|q| {
            src.simplices(q)
                .iter()
                .map(|s| {
                    let mut left = Vec::with_capacity((q + 1) * rm);
                    let mut right = Vec::with_capacity((q + 1) * rl);
                    for k in 0..=q {
                        let e = &s[k * (rm + rl)..(k + 1) * (rm + rl)];
                        left.extend_from_slice(&e[..rm]);
                        right.extend_from_slice(&e[rm..]);
                    }
                    tgt.index_of(q, &product_simplex(&left, &right))
                })
                .collect()
        })
        .collect();
    Ok(check_iso("shuffle", &src, &tgt, &map))
}

/// Windowed check of `N^di(Z^sigma; {1,-1}) = Z/2 x N^sigma(Z^sigma)` via
/// `(x_0, ..., x_q) -> (x_0 + ... + x_q, x_1, ..., x_q)` as real simplicial sets.
pub fn sigma_piece_iso_check(window: i64, q_max: usize) -> Result<IsoWitness> {
    let z = AffineMonoid::integers_sigma();
    let src = dihedral_nerve_piece_windowed(&z, &[vec![1], vec![-1]], q_max, window)?;
    let signs = constant_real_set(&[-1, 1], &|a| -a, q_max)?;
    let nerve = real_nerve(&z, q_max, Some(window))?;
    let tgt = product(&signs, &nerve)?;
    let map: Vec<Vec<Option<usize>>> = (0..=q_max)
        .map(|q| {
            src.simplices(q)
                .iter()
                .map(|s| {
                    let a: i64 = s.iter().sum();
                    tgt.index_of(q, &product_simplex(&[a], &s[1..]))
                })
                .collect()
        })
        .collect();
    Ok(check_iso(format!("sigma piece (window {window})"), &src, &tgt, &map))
}

/// Outcome of the power-map comparison for one `(j, r)`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PowerMapWitness {
    pub j: usize,
    pub r: usize,
    pub iso: IsoWitness,
    pub involution_compatible: bool,
    /// Fixed simplices of `sd_r N^di(N; rj + 1)`, which must be empty for `r >= 2`.
    pub off_weight_fixed: usize,
    pub ok: bool,
}

/// Verifies that the `r`-fold power map `(m_0..m_q) -> (m_0..m_q, ..., m_0..m_q)`
/// is an isomorphism from `N^di(N; j)` onto the `C_r`-fixed simplices of
/// `sd_r N^di(N; rj)`, compatible with the involution, and that fixed points
/// vanish in weight `rj + 1`. Emptiness is checked on vertices, which
/// suffices because faces of fixed simplices are fixed.
pub fn power_map_fixed_iso_check(j: usize, r: usize, q_max: usize) -> Result<PowerMapWitness> {
    if r == 0 {
        return Err(Error::Shape("r must be positive".into()));
    }
    let n = AffineMonoid::natural();
    let x = dihedral_nerve_piece(&n, &[vec![j as i64]], q_max)?;
    let big = dihedral_nerve_piece(&n, &[vec![(r * j) as i64]], r * (q_max + 1) - 1)?;
    let fixed = big.sd_r(r)?.fixed_subset()?;
    let power = |s: &[i64]| -> Vec<i64> { s.iter().copied().cycle().take(s.len() * r).collect() };
    let map: Vec<Vec<Option<usize>>> =
        (0..=q_max).map(|q| x.simplices(q).iter().map(|s| fixed.index_of(q, &power(s))).collect()).collect();
    let iso = check_iso(format!("power map j={j} r={r}"), &x, &fixed, &map);
    let mut involution_compatible = true;
    for q in 0..=q_max {
        let deg = r * (q + 1) - 1;
        for k in 0..x.count(q) {
            let wx = x.involution(q, k).expect("dihedral");
            let p = big.index_of(deg, &power(&x.simplices(q)[k])).expect("power lands in the nerve");
            let wp = big.involution(deg, p).expect("dihedral");
            if big.simplices(deg)[wp] != power(&x.simplices(q)[wx]) {
                involution_compatible = false;
            }
        }
    }
    let off_weight_fixed = if r >= 2 {
        let off = dihedral_nerve_piece(&n, &[vec![(r * j + 1) as i64]], r - 1)?;
        off.sd_r(r)?.fixed_subset()?.count(0)
    } else {
        0
    };
    let ok = iso.ok && involution_compatible && off_weight_fixed == 0;
    Ok(PowerMapWitness { j, r, iso, involution_compatible, off_weight_fixed, ok })
}

/// Edges of `(B^sigma Z)^{Z/2}` in the window `[-b, b]`: `x_2 -- 2 x_1 + x_2`.
pub fn sigma_integers_fixed_edges(b: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for x2 in -b..=b {
        for x1 in -b..=b {
            let y = 2 * x1 + x2;
            if y.abs() <= b {
                out.push((x2, y));
            }
        }
    }
    out
}
