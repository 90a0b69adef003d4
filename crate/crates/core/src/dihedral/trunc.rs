use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// A simplex is stored as a flat integer tuple; its meaning is up to the
/// construction that produced it (for nerves: the concatenated monoid entries).
pub type Simplex = Vec<i64>;

/// A levelwise simplicial automorphism of finite order, e.g. the involution
/// after real subdivision or the `C_r` generator after `r`-fold subdivision.
#[derive(Clone, Debug)]
pub struct LevelAction {
    pub order: usize,
    /// `generator[q][k]` is the image of simplex `k` in degree `q`.
    pub generator: Vec<Vec<u32>>,
}

/// A simplicial set truncated at `q_max`, optionally with a cyclic operator
/// `t`, a real involution `w` (reversing face order), and a levelwise action.
///
/// All maps are index tables between degrees; the simplex tuples are kept
/// for reporting and for formula-level checks.
#[derive(Clone, Debug)]
pub struct TruncSet {
    label: String,
    q_max: usize,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, u32>>,
    faces: Vec<Vec<Vec<u32>>>,
    degens: Vec<Vec<Vec<u32>>>,
    rotation: Option<Vec<Vec<u32>>>,
    involution: Option<Vec<Vec<u32>>>,
    action: Option<LevelAction>,
    nondeg_bound: Option<usize>,
}

/// Formulas describing a simplicial object on explicit tuples.
pub struct Formulas<'a> {
    pub face: &'a dyn Fn(usize, usize, &[i64]) -> Simplex,
    pub degeneracy: &'a dyn Fn(usize, usize, &[i64]) -> Simplex,
    pub rotation: Option<&'a dyn Fn(usize, &[i64]) -> Simplex>,
    pub involution: Option<&'a dyn Fn(usize, &[i64]) -> Simplex>,
}

fn lookup(index: &HashMap<Simplex, u32>, s: &Simplex, what: &str, q: usize) -> Result<u32> {
    index
        .get(s)
        .copied()
        .ok_or_else(|| Error::Internal(format!("{what} of a degree-{q} simplex leaves the truncated set: {s:?}")))
}

fn build_index(simplices: &[Vec<Simplex>]) -> Vec<HashMap<Simplex, u32>> {
    simplices
        .iter()
        .map(|level| level.iter().enumerate().map(|(k, s)| (s.clone(), k as u32)).collect())
        .collect()
}

impl TruncSet {
    /// Materializes a truncated object from its simplices (degrees `0..=q_max`)
    /// and formulas; fails when a formula leaves the enumerated set.
    pub fn from_formulas(
        label: impl Into<String>,
        mut simplices: Vec<Vec<Simplex>>,
        formulas: &Formulas<'_>,
        nondeg_bound: Option<usize>,
    ) -> Result<Self> {
        if simplices.is_empty() {
            return Err(Error::Shape("a truncated set needs degree 0".into()));
        }
        for level in &mut simplices {
            level.sort();
            level.dedup();
        }
        let q_max = simplices.len() - 1;
        let index = build_index(&simplices);
        let mut faces = vec![Vec::new(); q_max + 1];
        let mut degens = vec![Vec::new(); q_max + 1];
        for q in 0..=q_max {
            for s in &simplices[q] {
                if q > 0 {
                    let f = (0..=q)
                        .map(|i| lookup(&index[q - 1], &(formulas.face)(q, i, s), "a face", q))
                        .collect::<Result<Vec<_>>>()?;
                    faces[q].push(f);
                }
                if q < q_max {
                    let d = (0..=q)
                        .map(|i| lookup(&index[q + 1], &(formulas.degeneracy)(q, i, s), "a degeneracy", q))
                        .collect::<Result<Vec<_>>>()?;
                    degens[q].push(d);
                }
            }
        }
        let level_map = |f: &dyn Fn(usize, &[i64]) -> Simplex, what: &str| -> Result<Vec<Vec<u32>>> {
            (0..=q_max)
                .map(|q| simplices[q].iter().map(|s| lookup(&index[q], &f(q, s), what, q)).collect())
                .collect()
        };
        let rotation = formulas.rotation.map(|f| level_map(f, "the rotation")).transpose()?;
        let involution = formulas.involution.map(|f| level_map(f, "the involution")).transpose()?;
        Ok(TruncSet {
            label: label.into(),
            q_max,
            simplices,
            index,
            faces,
            degens,
            rotation,
            involution,
            action: None,
            nondeg_bound,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    pub fn simplices(&self, q: usize) -> &[Simplex] {
        &self.simplices[q]
    }

    pub fn count(&self, q: usize) -> usize {
        self.simplices[q].len()
    }

    pub fn index_of(&self, q: usize, s: &[i64]) -> Option<usize> {
        self.index[q].get(s).map(|&k| k as usize)
    }

    pub fn face(&self, q: usize, k: usize, i: usize) -> usize {
        self.faces[q][k][i] as usize
    }

    pub fn degeneracy(&self, q: usize, k: usize, i: usize) -> usize {
        self.degens[q][k][i] as usize
    }

    pub fn rotation(&self, q: usize, k: usize) -> Option<usize> {
        self.rotation.as_ref().map(|t| t[q][k] as usize)
    }

    pub fn involution(&self, q: usize, k: usize) -> Option<usize> {
        self.involution.as_ref().map(|w| w[q][k] as usize)
    }

    pub fn has_rotation(&self) -> bool {
        self.rotation.is_some()
    }

    pub fn has_involution(&self) -> bool {
        self.involution.is_some()
    }

    pub fn action(&self) -> Option<&LevelAction> {
        self.action.as_ref()
    }

    /// Degree above which no nondegenerate simplices exist (certified on
    /// construction up to `q_max`).
    pub fn nondeg_bound(&self) -> Option<usize> {
        self.nondeg_bound
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Drops the cyclic and real structure, keeping the simplicial one.
    pub fn forget_structure(mut self) -> Self {
        self.rotation = None;
        self.involution = None;
        self.action = None;
        self
    }

    /// Whether simplex `k` of degree `q` is degenerate: `s_i d_i x = x` for some `i`.
    pub fn is_degenerate(&self, q: usize, k: usize) -> bool {
        q > 0 && (0..q).any(|i| self.degens[q - 1][self.faces[q][k][i] as usize][i] as usize == k)
    }

    pub fn nondegenerate(&self, q: usize) -> Vec<usize> {
        (0..self.count(q)).filter(|&k| !self.is_degenerate(q, k)).collect()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.q_max).map(|q| self.nondegenerate(q).len()).collect()
    }

    /// Checks the claimed nondegenerate bound against the simplices present.
    pub fn check_nondeg_bound(&self) -> Result<()> {
        if let Some(b) = self.nondeg_bound {
            for q in b + 1..=self.q_max {
                if let Some(&k) = self.nondegenerate(q).first() {
                    return Err(Error::Internal(format!(
                        "{}: nondegenerate simplex {:?} in degree {q} above the bound {b}",
                        self.label, self.simplices[q][k]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Edgewise subdivision for the involution: `(sd X)_q = X_{2q+1}` with
    /// `d_i = d_i d_{2q+1-i}`, `s_i = s_i s_{2q+1-i}` and the involution `w_{2q+1}`
    /// acting levelwise.
    pub fn sd_sigma(&self) -> Result<TruncSet> {
        let w = self
            .involution
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{} has no involution to subdivide", self.label)))?;
        if self.q_max < 1 {
            return Err(Error::Truncation("real subdivision needs degree 1".into()));
        }
        let q_out = (self.q_max - 1) / 2;
        let simplices: Vec<Vec<Simplex>> = (0..=q_out).map(|q| self.simplices[2 * q + 1].clone()).collect();
        let mut faces = vec![Vec::new(); q_out + 1];
        let mut degens = vec![Vec::new(); q_out + 1];
        for q in 0..=q_out {
            let n = 2 * q + 1;
            for k in 0..self.count(n) {
                if q > 0 {
                    faces[q].push(
                        (0..=q)
                            .map(|i| {
                                let a = self.faces[n][k][n - i] as usize;
                                self.faces[n - 1][a][i]
                            })
                            .collect(),
                    );
                }
                if q < q_out {
                    degens[q].push(
                        (0..=q)
                            .map(|i| {
                                let a = self.degens[n][k][n - i] as usize;
                                self.degens[n + 1][a][i]
                            })
                            .collect(),
                    );
                }
            }
        }
        let generator = (0..=q_out).map(|q| w[2 * q + 1].clone()).collect();
        let index = build_index(&simplices);
        Ok(TruncSet {
            label: format!("sd_sigma({})", self.label),
            q_max: q_out,
            simplices,
            index,
            faces,
            degens,
            rotation: None,
            involution: None,
            action: Some(LevelAction { order: 2, generator }),
            nondeg_bound: self.nondeg_bound,
        })
    }

    /// `r`-fold edgewise subdivision: `(sd_r X)_q = X_{r(q+1)-1}`, faces and
    /// degeneracies acting on the `r` vertices `i + k(q+1)`, and `t^{q+1}`
    /// generating a levelwise `C_r`-action.
    pub fn sd_r(&self, r: usize) -> Result<TruncSet> {
        if r == 0 {
            return Err(Error::Shape("subdivision factor must be positive".into()));
        }
        let t = self
            .rotation
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{} has no cyclic structure to subdivide", self.label)))?;
        if self.q_max + 1 < r {
            return Err(Error::Truncation(format!("{}-fold subdivision needs degree {}", r, r - 1)));
        }
        let q_out = (self.q_max + 1) / r - 1;
        let deg = |q: usize| r * (q + 1) - 1;
        let simplices: Vec<Vec<Simplex>> = (0..=q_out).map(|q| self.simplices[deg(q)].clone()).collect();
        let mut faces = vec![Vec::new(); q_out + 1];
        let mut degens = vec![Vec::new(); q_out + 1];
        let mut generator = vec![Vec::new(); q_out + 1];
        for q in 0..=q_out {
            let n = deg(q);
            for k in 0..self.count(n) {
                if q > 0 {
                    faces[q].push(
                        (0..=q)
                            .map(|i| {
                                let mut cur = k;
                                let mut d = n;
                                for m in (0..r).rev() {
                                    cur = self.faces[d][cur][i + m * (q + 1)] as usize;
                                    d -= 1;
                                }
                                cur as u32
                            })
                            .collect(),
                    );
                }
                if q < q_out {
                    degens[q].push(
                        (0..=q)
                            .map(|i| {
                                let mut cur = k;
                                let mut d = n;
                                for m in (0..r).rev() {
                                    cur = self.degens[d][cur][i + m * (q + 1)] as usize;
                                    d += 1;
                                }
                                cur as u32
                            })
                            .collect(),
                    );
                }
                let mut cur = k;
                for _ in 0..=q {
                    cur = t[n][cur] as usize;
                }
                generator[q].push(cur as u32);
            }
        }
        let index = build_index(&simplices);
        Ok(TruncSet {
            label: format!("sd_{r}({})", self.label),
            q_max: q_out,
            simplices,
            index,
            faces,
            degens,
            rotation: None,
            involution: None,
            action: Some(LevelAction { order: r, generator }),
            nondeg_bound: self.nondeg_bound,
        })
    }

    /// Simplices fixed by the levelwise action, with restricted faces and
    /// degeneracies. Objects without an action are returned unchanged.
    pub fn fixed_subset(&self) -> Result<TruncSet> {
        let Some(act) = &self.action else { return Ok(self.clone()) };
        let keep: Vec<Vec<usize>> =
            (0..=self.q_max).map(|q| (0..self.count(q)).filter(|&k| act.generator[q][k] as usize == k).collect()).collect();
        let mut renum: Vec<HashMap<usize, u32>> = Vec::with_capacity(self.q_max + 1);
        for level in &keep {
            renum.push(level.iter().enumerate().map(|(new, &old)| (old, new as u32)).collect());
        }
        let remap = |q: usize, old: u32, what: &str| -> Result<u32> {
            renum[q].get(&(old as usize)).copied().ok_or_else(|| {
                Error::Internal(format!("{what} of a fixed simplex is not fixed (degree {q}, {})", self.label))
            })
        };
        let mut faces = vec![Vec::new(); self.q_max + 1];
        let mut degens = vec![Vec::new(); self.q_max + 1];
        for q in 0..=self.q_max {
            for &k in &keep[q] {
                if q > 0 {
                    faces[q].push(self.faces[q][k].iter().map(|&f| remap(q - 1, f, "a face")).collect::<Result<Vec<_>>>()?);
                }
                if q < self.q_max {
                    degens[q]
                        .push(self.degens[q][k].iter().map(|&s| remap(q + 1, s, "a degeneracy")).collect::<Result<Vec<_>>>()?);
                }
            }
        }
        let simplices: Vec<Vec<Simplex>> =
            keep.iter().enumerate().map(|(q, level)| level.iter().map(|&k| self.simplices[q][k].clone()).collect()).collect();
        let index = build_index(&simplices);
        Ok(TruncSet {
            label: format!("fixed({})", self.label),
            q_max: self.q_max,
            simplices,
            index,
            faces,
            degens,
            rotation: None,
            involution: None,
            action: None,
            nondeg_bound: self.nondeg_bound,
        })
    }

    /// Connected components: count and the smallest vertex of each class.
    pub fn pi0(&self) -> Pi0 {
        let n = self.count(0);
        let mut uf = UnionFind::new(n);
        if self.q_max >= 1 {
            for k in 0..self.count(1) {
                uf.union(self.faces[1][k][0] as usize, self.faces[1][k][1] as usize);
            }
        }
        let classes = uf.classes();
        Pi0 {
            count: classes.len(),
            representatives: classes.iter().map(|c| self.simplices[0][c[0]].clone()).collect(),
            classes: classes.iter().map(|c| c.iter().map(|&k| self.simplices[0][k].clone()).collect()).collect(),
        }
    }

    /// Replaces the truncated data by a deliberately corrupted involution (test helper).
    #[doc(hidden)]
    pub fn corrupt_involution(&mut self, q: usize, a: usize, b: usize) {
        if let Some(w) = &mut self.involution {
            w[q].swap(a, b);
        }
    }
}

/// Components of a truncated set.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Pi0 {
    pub count: usize,
    pub representatives: Vec<Simplex>,
    pub classes: Vec<Vec<Simplex>>,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Classes as sorted index lists, ordered by smallest member.
    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for x in 0..n {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
        out.sort();
        out
    }
}

/// One failed identity, pinpointed to a simplex.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Violation {
    pub identity: String,
    pub degree: usize,
    pub simplex: Simplex,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub label: String,
    pub ok: bool,
    pub checks: usize,
    pub first_violation: Option<Violation>,
}

struct Checker<'a> {
    x: &'a TruncSet,
    checks: usize,
    violation: Option<Violation>,
}

impl Checker<'_> {
    fn expect(&mut self, ok: bool, identity: impl FnOnce() -> String, q: usize, k: usize) -> bool {
        self.checks += 1;
        if !ok && self.violation.is_none() {
            self.violation = Some(Violation { identity: identity(), degree: q, simplex: self.x.simplices[q][k].clone() });
        }
        self.violation.is_none()
    }
}

/// Checks every simplicial, cyclic, real, dihedral and levelwise-action
/// identity that the truncation allows, on every simplex.
pub fn validate_structure(x: &TruncSet) -> ValidationReport {
    let mut c = Checker { x, checks: 0, violation: None };
    let d = |q: usize, k: usize, i: usize| x.faces[q][k][i] as usize;
    let s = |q: usize, k: usize, i: usize| x.degens[q][k][i] as usize;
    'outer: for q in 0..=x.q_max {
        for k in 0..x.count(q) {
            // Simplicial identities.
            if q >= 2 {
                for j in 1..=q {
                    for i in 0..j {
                        if !c.expect(d(q - 1, d(q, k, j), i) == d(q - 1, d(q, k, i), j - 1), || format!("d_{i} d_{j} = d_{} d_{i}", j - 1), q, k) {
                            break 'outer;
                        }
                    }
                }
            }
            if q < x.q_max {
                for j in 0..=q {
                    let sj = s(q, k, j);
                    for i in 0..=q + 1 {
                        let lhs = d(q + 1, sj, i);
                        let ok = if i < j {
                            q >= 1 && lhs == s(q - 1, d(q, k, i), j - 1)
                        } else if i == j || i == j + 1 {
                            lhs == k
                        } else {
                            q >= 1 && lhs == s(q - 1, d(q, k, i - 1), j)
                        };
                        if !c.expect(ok, || format!("d_{i} s_{j}"), q, k) {
                            break 'outer;
                        }
                    }
                    if q + 1 < x.q_max {
                        for i in 0..=j {
                            let ok = s(q + 1, sj, i) == s(q + 1, s(q, k, i), j + 1);
                            if !c.expect(ok, || format!("s_{i} s_{j} = s_{} s_{i}", j + 1), q, k) {
                                break 'outer;
                            }
                        }
                    }
                }
            }
            // Cyclic identities.
            if let Some(t) = &x.rotation {
                let tt = |q: usize, k: usize| t[q][k] as usize;
                let mut cur = k;
                for _ in 0..=q {
                    cur = tt(q, cur);
                }
                if !c.expect(cur == k, || format!("t_{q}^{} = id", q + 1), q, k) {
                    break 'outer;
                }
                if q >= 1 {
                    if !c.expect(d(q, tt(q, k), 0) == d(q, k, q), || "d_0 t = d_n".into(), q, k) {
                        break 'outer;
                    }
                    for i in 1..=q {
                        if !c.expect(d(q, tt(q, k), i) == tt(q - 1, d(q, k, i - 1)), || format!("d_{i} t = t d_{}", i - 1), q, k) {
                            break 'outer;
                        }
                    }
                }
                if q < x.q_max {
                    let lhs = s(q, tt(q, k), 0);
                    let rhs = tt(q + 1, tt(q + 1, s(q, k, q)));
                    if !c.expect(lhs == rhs, || "s_0 t = t^2 s_n".into(), q, k) {
                        break 'outer;
                    }
                    for i in 1..=q {
                        if !c.expect(s(q, tt(q, k), i) == tt(q + 1, s(q, k, i - 1)), || format!("s_{i} t = t s_{}", i - 1), q, k) {
                            break 'outer;
                        }
                    }
                }
            }
            // Real identities.
            if let Some(w) = &x.involution {
                let ww = |q: usize, k: usize| w[q][k] as usize;
                if !c.expect(ww(q, ww(q, k)) == k, || "w^2 = id".into(), q, k) {
                    break 'outer;
                }
                if q >= 1 {
                    for i in 0..=q {
                        if !c.expect(d(q, ww(q, k), i) == ww(q - 1, d(q, k, q - i)), || format!("d_{i} w = w d_{}", q - i), q, k) {
                            break 'outer;
                        }
                    }
                }
                if q < x.q_max {
                    for i in 0..=q {
                        if !c.expect(s(q, ww(q, k), i) == ww(q + 1, s(q, k, q - i)), || format!("s_{i} w = w s_{}", q - i), q, k) {
                            break 'outer;
                        }
                    }
                }
                if let Some(t) = &x.rotation {
                    // w t = t^{-1} w, checked as t w t = w.
                    let lhs = t[q][ww(q, t[q][k] as usize)] as usize;
                    if !c.expect(lhs == ww(q, k), || "w t = t^-1 w".into(), q, k) {
                        break 'outer;
                    }
                }
            }
            // Levelwise action.
            if let Some(act) = &x.action {
                let g = |q: usize, k: usize| act.generator[q][k] as usize;
                let mut cur = k;
                for _ in 0..act.order {
                    cur = g(q, cur);
                }
                if !c.expect(cur == k, || format!("g^{} = id", act.order), q, k) {
                    break 'outer;
                }
                if q >= 1 {
                    for i in 0..=q {
                        if !c.expect(d(q, g(q, k), i) == g(q - 1, d(q, k, i)), || format!("g d_{i} = d_{i} g"), q, k) {
                            break 'outer;
                        }
                    }
                }
                if q < x.q_max {
                    for i in 0..=q {
                        if !c.expect(s(q, g(q, k), i) == g(q + 1, s(q, k, i)), || format!("g s_{i} = s_{i} g"), q, k) {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    ValidationReport { label: x.label.clone(), ok: c.violation.is_none(), checks: c.checks, first_violation: c.violation }
}

/// Outcome of a windowed component count.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WindowedPi0 {
    pub stabilized: bool,
    pub count: usize,
    pub bounds: Vec<i64>,
    pub counts: Vec<usize>,
    /// Class index of each vertex in the inner window, at the largest bound.
    pub inner_classes: Vec<(i64, usize)>,
}

/// Components of an infinite graph on integer vertices, computed on windows
/// `[-b, b]` for `b = bound, bound + 1, bound + 2`. The count is certified only
/// when all three windows agree on the number of classes meeting the inner
/// window `[-bound, bound]` and on how its vertices are grouped.
pub fn pi0_windowed(edges: &dyn Fn(i64) -> Vec<(i64, i64)>, bound: i64) -> WindowedPi0 {
    let mut counts = Vec::new();
    let mut groupings = Vec::new();
    let bounds: Vec<i64> = (0..3).map(|k| bound + k).collect();
    for &b in &bounds {
        let n = (2 * b + 1) as usize;
        let mut uf = UnionFind::new(n);
        for (u, v) in edges(b) {
            if u.abs() <= b && v.abs() <= b {
                uf.union((u + b) as usize, (v + b) as usize);
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut grouping = Vec::new();
        for x in -bound..=bound {
            let r = uf.find((x + b) as usize);
            let cls = match roots.iter().position(|&y| y == r) {
                Some(p) => p,
                None => {
                    roots.push(r);
                    roots.len() - 1
                }
            };
            grouping.push((x, cls));
        }
        counts.push(roots.len());
        groupings.push(grouping);
    }
    let stabilized = counts.windows(2).all(|w| w[0] == w[1]) && groupings.windows(2).all(|w| w[0] == w[1]);
    WindowedPi0 { stabilized, count: counts[2], bounds, counts, inner_classes: groupings.pop().unwrap_or_default() }
}
