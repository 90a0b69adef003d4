//! Mackey functors for the group of order two, stored as two presented
//! abelian groups with restriction, transfer and the Weyl involution.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgab::{is_exact, ExactnessReport, FgAbGroup, GroupHom, IntMatrix, Invariants};
use crate::involutive_algebra::{InvolutiveRing, RingHom};

/// A two-level Mackey functor: `e` carries the involution `w`, `g` is the
/// fixed level, `res: g -> e`, `tran: e -> g`.
#[derive(Clone, Debug)]
pub struct MackeyZ2 {
    e: FgAbGroup,
    w: GroupHom,
    g: FgAbGroup,
    res: GroupHom,
    tran: GroupHom,
}

/// Serializable summary of a Mackey functor.
#[derive(Clone, Debug, Serialize)]
pub struct MackeySummary {
    pub e_level: Invariants,
    pub g_level: Invariants,
    pub e_generators: usize,
    pub g_generators: usize,
    pub w: IntMatrix,
    pub res: IntMatrix,
    pub tran: IntMatrix,
}

fn first_bad_generator(f: &GroupHom, h: &GroupHom) -> Option<usize> {
    let t = f.target();
    (0..f.source().n_gens()).find(|&j| {
        let x = f.source().generator(j);
        !t.elements_equal(&f.apply(&x), &h.apply(&x))
    })
}

fn check_endpoints(name: &str, f: &GroupHom, source: &FgAbGroup, target: &FgAbGroup) -> Result<()> {
    if !f.source().same_presentation(source) || !f.target().same_presentation(target) {
        return Err(Error::MackeyAxiom(format!("{name} does not connect the expected levels")));
    }
    Ok(())
}

impl MackeyZ2 {
    /// Builds a Mackey functor after checking `w^2 = id`, `res∘tran = id + w`,
    /// `w∘res = res` and `tran∘w = tran`.
    pub fn new(e: FgAbGroup, w: GroupHom, g: FgAbGroup, res: GroupHom, tran: GroupHom) -> Result<Self> {
        check_endpoints("w", &w, &e, &e)?;
        check_endpoints("res", &res, &g, &e)?;
        check_endpoints("tran", &tran, &e, &g)?;
        let id = GroupHom::identity(&e);
        let ww = w.then(&w)?;
        if let Some(j) = first_bad_generator(&ww, &id) {
            return Err(Error::MackeyAxiom(format!("w does not square to the identity on e-generator {j}")));
        }
        let rt = tran.then(&res)?;
        let expected = id.add(&w)?;
        if let Some(j) = first_bad_generator(&rt, &expected) {
            return Err(Error::MackeyAxiom(format!("double coset formula res∘tran = id + w fails on e-generator {j}")));
        }
        if let Some(j) = first_bad_generator(&res.then(&w)?, &res) {
            return Err(Error::MackeyAxiom(format!("w∘res != res on g-generator {j}")));
        }
        if let Some(j) = first_bad_generator(&w.then(&tran)?, &tran) {
            return Err(Error::MackeyAxiom(format!("tran∘w != tran on e-generator {j}")));
        }
        Ok(MackeyZ2 { e, w, g, res, tran })
    }

    /// Convenience constructor from matrices on fixed presentations.
    pub fn from_matrices(e: FgAbGroup, w: IntMatrix, g: FgAbGroup, res: IntMatrix, tran: IntMatrix) -> Result<Self> {
        let wh = GroupHom::new(e.clone(), e.clone(), w)?;
        let rh = GroupHom::new(g.clone(), e.clone(), res)?;
        let th = GroupHom::new(e.clone(), g.clone(), tran)?;
        Self::new(e, wh, g, rh, th)
    }

    /// The constant Mackey functor: levels `(A, A)`, `res = id`, `tran = 2`, `w = id`.
    pub fn constant(a: &FgAbGroup) -> Self {
        Self::new(a.clone(), GroupHom::identity(a), a.clone(), GroupHom::identity(a), GroupHom::scalar(a, 2))
            .expect("constant Mackey functors satisfy the axioms")
    }

    /// Fixed-point functor of a group with involution: levels `(M, M^w)`,
    /// `res` the inclusion and `tran(x) = x + w(x)`.
    pub fn fixed_point(w: &GroupHom) -> Result<Self> {
        let m = w.source().clone();
        let (fixed, inc) = w.sub(&GroupHom::identity(&m))?.kernel();
        let norm = GroupHom::identity(&m).add(w)?;
        let tran = norm.factor_through_injection(&inc)?;
        Self::new(m, w.clone(), fixed, inc, tran)
    }

    /// Induced functor: levels `(M ⊕ M, M)` with the swap, `res` the diagonal and `tran` the sum.
    pub fn induced(m: &FgAbGroup) -> Self {
        let n = m.n_gens();
        let e = FgAbGroup::direct_sum(&[m, m]);
        let id = IntMatrix::identity(n);
        let zero = IntMatrix::zeros(n, n);
        let swap = zero.hstack(&id).vstack(&id.hstack(&zero));
        let diag = id.vstack(&id);
        let sum = id.hstack(&id);
        Self::from_matrices(e, swap, m.clone(), diag, sum).expect("induced Mackey functors satisfy the axioms")
    }

    /// The Burnside functor: `e = Z`, `g = Z^2` on `[C2/C2], [C2/e]`.
    pub fn burnside() -> Self {
        Self::from_matrices(
            FgAbGroup::free(1),
            IntMatrix::identity(1),
            FgAbGroup::free(2),
            IntMatrix::from_rows(&[vec![1, 2]]),
            IntMatrix::from_rows(&[vec![0], vec![1]]),
        )
        .expect("the Burnside functor satisfies the axioms")
    }

    pub fn zero() -> Self {
        Self::constant(&FgAbGroup::trivial())
    }

    pub fn direct_sum(&self, other: &MackeyZ2) -> MackeyZ2 {
        MackeyZ2::new(
            FgAbGroup::direct_sum(&[&self.e, &other.e]),
            self.w.direct_sum(&other.w),
            FgAbGroup::direct_sum(&[&self.g, &other.g]),
            self.res.direct_sum(&other.res),
            self.tran.direct_sum(&other.tran),
        )
        .expect("direct sums of Mackey functors are Mackey functors")
    }

    pub fn e_level(&self) -> &FgAbGroup {
        &self.e
    }

    pub fn g_level(&self) -> &FgAbGroup {
        &self.g
    }

    pub fn w(&self) -> &GroupHom {
        &self.w
    }

    pub fn res(&self) -> &GroupHom {
        &self.res
    }

    pub fn tran(&self) -> &GroupHom {
        &self.tran
    }

    /// Re-checks the double coset formula `res∘tran = id + w` as a matrix identity modulo relations.
    pub fn double_coset_holds(&self) -> bool {
        let lhs = self.tran.then(&self.res).expect("levels compose");
        let rhs = GroupHom::identity(&self.e).add(&self.w).expect("parallel maps");
        lhs.equals(&rhs)
    }

    pub fn summary(&self) -> MackeySummary {
        MackeySummary {
            e_level: self.e.invariants().clone(),
            g_level: self.g.invariants().clone(),
            e_generators: self.e.n_gens(),
            g_generators: self.g.n_gens(),
            w: self.w.matrix().clone(),
            res: self.res.matrix().clone(),
            tran: self.tran.matrix().clone(),
        }
    }
}

/// A morphism of Mackey functors.
#[derive(Clone, Debug)]
pub struct MackeyHom {
    source: MackeyZ2,
    target: MackeyZ2,
    f_e: GroupHom,
    f_g: GroupHom,
}

impl MackeyHom {
    /// Checks compatibility with `w`, `res` and `tran`.
    pub fn new(source: MackeyZ2, target: MackeyZ2, f_e: GroupHom, f_g: GroupHom) -> Result<Self> {
        check_endpoints("f_e", &f_e, &source.e, &target.e)?;
        check_endpoints("f_g", &f_g, &source.g, &target.g)?;
        if let Some(j) = first_bad_generator(&source.w.then(&f_e)?, &f_e.then(&target.w)?) {
            return Err(Error::MackeyAxiom(format!("morphism does not commute with w on e-generator {j}")));
        }
        if let Some(j) = first_bad_generator(&f_g.then(&target.res)?, &source.res.then(&f_e)?) {
            return Err(Error::MackeyAxiom(format!("morphism does not commute with res on g-generator {j}")));
        }
        if let Some(j) = first_bad_generator(&f_e.then(&target.tran)?, &source.tran.then(&f_g)?) {
            return Err(Error::MackeyAxiom(format!("morphism does not commute with tran on e-generator {j}")));
        }
        Ok(MackeyHom { source, target, f_e, f_g })
    }

    pub fn identity(m: &MackeyZ2) -> Self {
        MackeyHom { source: m.clone(), target: m.clone(), f_e: GroupHom::identity(&m.e), f_g: GroupHom::identity(&m.g) }
    }

    pub fn source(&self) -> &MackeyZ2 {
        &self.source
    }

    pub fn target(&self) -> &MackeyZ2 {
        &self.target
    }

    pub fn f_e(&self) -> &GroupHom {
        &self.f_e
    }

    pub fn f_g(&self) -> &GroupHom {
        &self.f_g
    }

    pub fn then(&self, other: &MackeyHom) -> Result<MackeyHom> {
        MackeyHom::new(self.source.clone(), other.target.clone(), self.f_e.then(&other.f_e)?, self.f_g.then(&other.f_g)?)
    }

    pub fn is_iso(&self) -> bool {
        self.f_e.is_iso() && self.f_g.is_iso()
    }

    /// The inverse morphism, a verifiable witness that `self` is an isomorphism.
    pub fn inverse(&self) -> Result<MackeyHom> {
        MackeyHom::new(self.target.clone(), self.source.clone(), self.f_e.inverse()?, self.f_g.inverse()?)
    }

    /// Levelwise kernel with the induced structure maps, and its inclusion.
    pub fn kernel(&self) -> Result<(MackeyZ2, MackeyHom)> {
        let (ke, inc_e) = self.f_e.kernel();
        let (kg, inc_g) = self.f_g.kernel();
        let induced = |name: &str, r: Result<GroupHom>| {
            r.map_err(|e| Error::MackeyAxiom(format!("{name} does not restrict to the kernel: {e}")))
        };
        let w = induced("w", inc_e.then(&self.source.w)?.factor_through_injection(&inc_e))?;
        let res = induced("res", inc_g.then(&self.source.res)?.factor_through_injection(&inc_e))?;
        let tran = induced("tran", inc_e.then(&self.source.tran)?.factor_through_injection(&inc_g))?;
        let k = MackeyZ2::new(ke, w, kg, res, tran)?;
        let inc = MackeyHom::new(k.clone(), self.source.clone(), inc_e, inc_g)?;
        Ok((k, inc))
    }

    /// Levelwise cokernel with the induced structure maps, and its projection.
    pub fn cokernel(&self) -> Result<(MackeyZ2, MackeyHom)> {
        let (ce, pe) = self.f_e.cokernel();
        let (cg, pg) = self.f_g.cokernel();
        let t = &self.target;
        let induced = |name: &str, f: &GroupHom, s: &FgAbGroup, d: &FgAbGroup| {
            f.with_presentations(s, d)
                .map_err(|e| Error::MackeyAxiom(format!("{name} does not descend to the cokernel: {e}")))
        };
        let w = induced("w", &t.w, &ce, &ce)?;
        let res = induced("res", &t.res, &cg, &ce)?;
        let tran = induced("tran", &t.tran, &ce, &cg)?;
        let c = MackeyZ2::new(ce, w, cg, res, tran)?;
        let proj = MackeyHom::new(self.target.clone(), c.clone(), pe, pg)?;
        Ok((c, proj))
    }
}

/// Levelwise exactness of a chain of Mackey morphisms.
#[derive(Clone, Debug, Serialize)]
pub struct MackeyExactness {
    pub exact: bool,
    pub e_level: ExactnessReport,
    pub g_level: ExactnessReport,
}

pub fn is_exact_mackey(seq: &[MackeyHom]) -> Result<MackeyExactness> {
    let e: Vec<GroupHom> = seq.iter().map(|f| f.f_e.clone()).collect();
    let g: Vec<GroupHom> = seq.iter().map(|f| f.f_g.clone()).collect();
    let e_level = is_exact(&e)?;
    let g_level = is_exact(&g)?;
    Ok(MackeyExactness { exact: e_level.exact && g_level.exact, e_level, g_level })
}

/// Extends an equivariant e-level map `M(e) -> L(e)` to a Mackey morphism
/// when `L` has injective restriction (as fixed-point functors do). The
/// g-level map is forced: it is `f_e∘res_M` factored through `res_L`.
pub fn extend_underlying_hom(m: &MackeyZ2, l: &MackeyZ2, f_e: &GroupHom) -> Result<MackeyHom> {
    if !l.res.is_injective() {
        return Err(Error::Unsupported("target restriction is not injective".into()));
    }
    if let Some(j) = first_bad_generator(&m.w.then(f_e)?, &f_e.then(&l.w)?) {
        return Err(Error::IllDefined(format!("e-level map is not equivariant on generator {j}")));
    }
    let f_g = m
        .res
        .then(f_e)?
        .factor_through_injection(&l.res)
        .map_err(|e| Error::Internal(format!("restricted map misses the fixed subgroup: {e}")))?;
    MackeyHom::new(m.clone(), l.clone(), f_e.clone(), f_g)
}

/// A Mackey functor with a levelwise module structure over a commutative
/// ring `A` with trivial involution: `act_e[i]`, `act_g[i]` are the actions
/// of the additive generator `i` of `A`.
#[derive(Clone, Debug)]
pub struct MackeyModule {
    mackey: MackeyZ2,
    ring: InvolutiveRing,
    act_e: Vec<GroupHom>,
    act_g: Vec<GroupHom>,
}

impl MackeyModule {
    /// Checks module axioms on each level and compatibility with `w`, `res`, `tran`.
    pub fn new(mackey: MackeyZ2, ring: InvolutiveRing, act_e: Vec<IntMatrix>, act_g: Vec<IntMatrix>) -> Result<Self> {
        if !ring.has_trivial_involution() {
            return Err(Error::Unsupported("module structures are over rings with trivial involution".into()));
        }
        let n = ring.n_gens();
        if act_e.len() != n || act_g.len() != n {
            return Err(Error::ModuleAxiom("one action matrix per ring generator is required".into()));
        }
        let wrap = |lvl: &FgAbGroup, ms: Vec<IntMatrix>, name: &str| -> Result<Vec<GroupHom>> {
            ms.into_iter()
                .enumerate()
                .map(|(i, m)| {
                    GroupHom::new(lvl.clone(), lvl.clone(), m)
                        .map_err(|e| Error::ModuleAxiom(format!("{name}-level action of {} is not additive: {e}", ring.names()[i])))
                })
                .collect()
        };
        let act_e = wrap(&mackey.e, act_e, "e")?;
        let act_g = wrap(&mackey.g, act_g, "g")?;
        let module = MackeyModule { mackey, ring, act_e, act_g };
        module.check()?;
        Ok(module)
    }

    fn action_of(acts: &[GroupHom], a: &[BigInt], level: &FgAbGroup) -> GroupHom {
        let mut m = IntMatrix::zeros(level.n_gens(), level.n_gens());
        for (c, act) in a.iter().zip(acts) {
            m = m.add(&act.matrix().scale(c));
        }
        GroupHom::new(level.clone(), level.clone(), m).expect("sums of endomorphisms are well defined")
    }

    /// Action of an arbitrary ring element on the e-level.
    pub fn act_e(&self, a: &[BigInt]) -> GroupHom {
        Self::action_of(&self.act_e, a, &self.mackey.e)
    }

    /// Action of an arbitrary ring element on the g-level.
    pub fn act_g(&self, a: &[BigInt]) -> GroupHom {
        Self::action_of(&self.act_g, a, &self.mackey.g)
    }

    fn check(&self) -> Result<()> {
        let r = &self.ring;
        let n = r.n_gens();
        let names = r.names();
        for (lvl, acts, label) in [(&self.mackey.e, &self.act_e, "e"), (&self.mackey.g, &self.act_g, "g")] {
            let id = GroupHom::identity(lvl);
            if first_bad_generator(&Self::action_of(acts, r.one(), lvl), &id).is_some() {
                return Err(Error::ModuleAxiom(format!("unit does not act as the identity on the {label}-level")));
            }
            for (k, rel) in r.additive().relations().row_iter().enumerate() {
                if !Self::action_of(acts, rel, lvl).is_zero() {
                    return Err(Error::ModuleAxiom(format!("additive relation {k} of the ring does not act by zero on the {label}-level")));
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let prod = r.mul(&r.additive().generator(i), &r.additive().generator(j));
                    let lhs = acts[j].then(&acts[i])?;
                    let rhs = Self::action_of(acts, &prod, lvl);
                    if first_bad_generator(&lhs, &rhs).is_some() {
                        return Err(Error::ModuleAxiom(format!(
                            "{label}-level action is not multiplicative on {}*{}",
                            names[i], names[j]
                        )));
                    }
                }
            }
        }
        let m = &self.mackey;
        for i in 0..n {
            let (ae, ag) = (&self.act_e[i], &self.act_g[i]);
            if first_bad_generator(&ae.then(&m.w)?, &m.w.then(ae)?).is_some() {
                return Err(Error::ModuleAxiom(format!("action of {} does not commute with w", names[i])));
            }
            if first_bad_generator(&ag.then(&m.res)?, &m.res.then(ae)?).is_some() {
                return Err(Error::ModuleAxiom(format!("action of {} does not commute with res", names[i])));
            }
            if first_bad_generator(&ae.then(&m.tran)?, &m.tran.then(ag)?).is_some() {
                return Err(Error::ModuleAxiom(format!("action of {} does not commute with tran", names[i])));
            }
        }
        Ok(())
    }

    pub fn mackey(&self) -> &MackeyZ2 {
        &self.mackey
    }

    pub fn ring(&self) -> &InvolutiveRing {
        &self.ring
    }

    /// The constant functor on `A` with `A` acting by multiplication.
    pub fn constant(ring: &InvolutiveRing) -> Result<Self> {
        let mackey = MackeyZ2::constant(ring.additive());
        let acts: Vec<IntMatrix> =
            (0..ring.n_gens()).map(|i| ring.mul_hom(&ring.additive().generator(i)).matrix().clone()).collect();
        Self::new(mackey, ring.clone(), acts.clone(), acts)
    }

    /// Levelwise base change `M ⊗_A B` along a ring map `f: A -> B`.
    pub fn base_change(&self, f: &RingHom) -> Result<MackeyModule> {
        let (a, b) = (f.source(), f.target());
        if a.names() != self.ring.names() || !a.additive().same_presentation(self.ring.additive()) {
            return Err(Error::NotComposable("ring map does not start at the module's ring".into()));
        }
        let nb = b.n_gens();
        let level = |lvl: &FgAbGroup, acts: &[GroupHom]| -> FgAbGroup {
            let t = lvl.tensor(b.additive());
            let mut rels = Vec::new();
            for (i, act) in acts.iter().enumerate() {
                let fa = f.apply(&a.additive().generator(i));
                for mi in 0..lvl.n_gens() {
                    let m = lvl.generator(mi);
                    let am = act.apply(&m);
                    for bj in 0..nb {
                        let bv = b.additive().generator(bj);
                        let lhs = lvl.tensor_elements(b.additive(), &am, &bv);
                        let rhs = lvl.tensor_elements(b.additive(), &m, &b.mul(&fa, &bv));
                        rels.push(lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect::<Vec<BigInt>>());
                    }
                }
            }
            t.quotient_by(&rels)
        };
        let me = &self.mackey;
        let e = level(&me.e, &self.act_e);
        let g = level(&me.g, &self.act_g);
        let idb = IntMatrix::identity(nb);
        let ext = |h: &GroupHom, s: &FgAbGroup, t: &FgAbGroup, name: &str| {
            GroupHom::new(s.clone(), t.clone(), h.matrix().kron(&idb))
                .map_err(|err| Error::IllDefined(format!("{name} does not descend to the base change: {err}")))
        };
        let w = ext(&me.w, &e, &e, "w")?;
        let res = ext(&me.res, &g, &e, "res")?;
        let tran = ext(&me.tran, &e, &g, "tran")?;
        let mackey = MackeyZ2::new(e, w, g, res, tran)?;
        let b_act = |lvl: &FgAbGroup| -> Vec<IntMatrix> {
            (0..nb)
                .map(|k| {
                    let mk = b.mul_hom(&b.additive().generator(k));
                    IntMatrix::identity(lvl.n_gens()).kron(mk.matrix())
                })
                .collect()
        };
        let act_e = b_act(self.mackey.e_level());
        let act_g = b_act(self.mackey.g_level());
        MackeyModule::new(mackey, b.clone(), act_e, act_g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::bigvec;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn make_mackey_examples() {
        let c = MackeyZ2::from_matrices(z(), IntMatrix::identity(1), z(), IntMatrix::identity(1), IntMatrix::diagonal(&[2]));
        assert!(c.is_ok());
        let sigma = MackeyZ2::from_matrices(
            z(),
            IntMatrix::diagonal(&[-1]),
            FgAbGroup::trivial(),
            IntMatrix::zeros(1, 0),
            IntMatrix::zeros(0, 1),
        );
        assert!(sigma.is_ok());
        let bad = MackeyZ2::from_matrices(z(), IntMatrix::identity(1), z(), IntMatrix::identity(1), IntMatrix::identity(1));
        assert!(matches!(bad, Err(Error::MackeyAxiom(m)) if m.contains("double coset")));
    }

    #[test]
    fn standard_constructions() {
        let fp = MackeyZ2::fixed_point(&GroupHom::scalar(&z(), -1)).unwrap();
        assert!(fp.g_level().is_trivial());
        let ind = MackeyZ2::induced(&z());
        assert_eq!(ind.e_level().invariants(), &Invariants::free(2));
        // res(tran(x, y)) = (x + y, x + y) = (x, y) + (y, x).
        let x = bigvec(&[3, 5]);
        assert_eq!(ind.res().apply(&ind.tran().apply(&x)), bigvec(&[8, 8]));
        let b = MackeyZ2::burnside();
        assert_eq!(b.res().apply(&b.tran().apply(&bigvec(&[1]))), bigvec(&[2]));
        for m in [fp, ind, b, MackeyZ2::constant(&FgAbGroup::cyclic(6))] {
            assert!(m.double_coset_holds());
        }
    }

    #[test]
    fn fixed_point_of_swap() {
        let ind = MackeyZ2::induced(&z());
        let l = MackeyZ2::fixed_point(ind.w()).unwrap();
        assert_eq!(l.g_level().invariants(), &Invariants::free(1));
        let h = extend_underlying_hom(&ind, &l, &GroupHom::identity(ind.e_level())).unwrap();
        // Oracle: g-level generator x maps to the diagonal (x, x).
        let img = l.res().apply(&h.f_g().apply(&bigvec(&[1])));
        assert_eq!(img, bigvec(&[1, 1]));
        assert!(h.f_g().is_iso());
    }

    #[test]
    fn extension_examples() {
        let c = MackeyZ2::constant(&z());
        let l = MackeyZ2::fixed_point(&GroupHom::identity(&z())).unwrap();
        let h = extend_underlying_hom(&c, &l, &GroupHom::identity(&z())).unwrap();
        assert!(h.f_g().is_iso());
        let zero = MackeyZ2::zero();
        let h = extend_underlying_hom(&zero, &l, &GroupHom::zero(zero.e_level(), l.e_level())).unwrap();
        assert!(h.f_g().is_zero());
    }

    #[test]
    fn kernel_cokernel_and_exactness() {
        let c = MackeyZ2::constant(&z());
        let id = MackeyHom::identity(&c);
        let (k, _) = id.kernel().unwrap();
        assert!(k.e_level().is_trivial() && k.g_level().is_trivial());
        // Split 0 -> C -> C + B -> B -> 0.
        let b = MackeyZ2::burnside();
        let s = c.direct_sum(&b);
        let inc = MackeyHom::new(
            c.clone(),
            s.clone(),
            GroupHom::new(c.e_level().clone(), s.e_level().clone(), IntMatrix::from_rows(&[vec![1], vec![0]])).unwrap(),
            GroupHom::new(c.g_level().clone(), s.g_level().clone(), IntMatrix::from_rows(&[vec![1], vec![0], vec![0]]))
                .unwrap(),
        )
        .unwrap();
        let (q, proj) = inc.cokernel().unwrap();
        assert!(q.double_coset_holds());
        assert!(is_exact_mackey(&[inc, proj]).unwrap().exact);
    }

    #[test]
    fn base_change_of_constant_functor() {
        let f2 = InvolutiveRing::f2();
        let f4 = InvolutiveRing::f4();
        let f = RingHom::new(f2.clone(), f4.clone(), IntMatrix::from_rows(&[vec![1], vec![0]])).unwrap();
        let c = MackeyModule::constant(&f2).unwrap();
        let bc = c.base_change(&f).unwrap();
        assert_eq!(bc.mackey().e_level(), f4.additive());
        assert_eq!(bc.mackey().g_level(), f4.additive());
        let id = RingHom::identity(&f2);
        let same = c.base_change(&id).unwrap();
        assert_eq!(same.mackey().g_level(), c.mackey().g_level());
    }
}
