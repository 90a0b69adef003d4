//! The zeroth homotopy Mackey functor of real topological Hochschild
//! homology of a commutative ring with trivial involution.
//!
//! The fixed level is `(A ⊗ A)/T_A`, where `T_A` is generated by
//! `x ⊗ a²y − a²x ⊗ y` and `x ⊗ 2ay − 2ax ⊗ y`. It suffices to let `a, x, y`
//! run over additive generators: both families are additive in `x` and `y`,
//! the second is additive in `a`, and the first satisfies
//! `F₁(a + b) = F₁(a) + F₁(b) + F₂(ab)`, so every instance is a sum of
//! generator instances. The brute-force tests below confirm this on small rings.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgab::{is_short_exact, ExactnessReport, FgAbGroup, GroupHom, IntMatrix, Invariants};
use crate::involutive_algebra::{InvolutiveRing, RingHom};
use crate::mackey::{MackeyHom, MackeyModule, MackeySummary, MackeyZ2};

fn require_trivial_involution(a: &InvolutiveRing) -> Result<()> {
    if a.has_trivial_involution() {
        Ok(())
    } else {
        Err(Error::Unsupported("the presentation is only available for rings with trivial involution".into()))
    }
}

fn scale(v: &[BigInt], k: i64) -> Vec<BigInt> {
    v.iter().map(|x| x * k).collect()
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// The two families generating `T_A`, for `x, y, a` over additive generators,
/// as elements of `A ⊗ A` (generator `(i, j)` at index `i * n + j`).
pub fn t_ideal_generators(a: &InvolutiveRing) -> Result<Vec<Vec<BigInt>>> {
    require_trivial_involution(a)?;
    let add = a.additive();
    let n = a.n_gens();
    let mut out = Vec::with_capacity(2 * n * n * n);
    for k in 0..n {
        let c = add.generator(k);
        let c2 = a.square(&c);
        let twoc = scale(&c, 2);
        for i in 0..n {
            let x = add.generator(i);
            for j in 0..n {
                let y = add.generator(j);
                out.push(t_element(a, &x, &y, &c2));
                out.push(t_element(a, &x, &y, &twoc));
            }
        }
    }
    Ok(out)
}

/// `x ⊗ sy − sx ⊗ y`.
fn t_element(a: &InvolutiveRing, x: &[BigInt], y: &[BigInt], s: &[BigInt]) -> Vec<BigInt> {
    let add = a.additive();
    sub(&add.tensor_elements(add, x, &a.mul(s, y)), &add.tensor_elements(add, &a.mul(s, x), y))
}

/// The presentation of the Mackey functor together with `α(x) = 1 ⊗ x`.
#[derive(Clone, Debug)]
pub struct Pi0ThrPresentation {
    pub ring: InvolutiveRing,
    pub module: MackeyModule,
    pub alpha: GroupHom,
    pub t_generators: Vec<Vec<BigInt>>,
}

impl Pi0ThrPresentation {
    pub fn mackey(&self) -> &MackeyZ2 {
        self.module.mackey()
    }
}

/// Builds `A ⇄ (A ⊗ A)/T_A` with `res(x ⊗ y) = xy`, `tran(a) = 2a ⊗ 1`,
/// trivial `w`, and `A` acting on the right tensor factor.
pub fn pi0_thr(a: &InvolutiveRing) -> Result<Pi0ThrPresentation> {
    let t_generators = t_ideal_generators(a)?;
    let add = a.additive();
    let n = a.n_gens();
    let g = add.tensor(add).quotient_by(&t_generators);
    let res_cols: Vec<Vec<BigInt>> = (0..n * n).map(|ij| a.mul(&add.generator(ij / n), &add.generator(ij % n))).collect();
    let tran_cols: Vec<Vec<BigInt>> =
        (0..n).map(|k| add.tensor_elements(add, &scale(&add.generator(k), 2), a.one())).collect();
    let alpha_cols: Vec<Vec<BigInt>> = (0..n).map(|k| add.tensor_elements(add, a.one(), &add.generator(k))).collect();
    let mackey = MackeyZ2::from_matrices(
        add.clone(),
        IntMatrix::identity(n),
        g.clone(),
        IntMatrix::from_columns(&res_cols, n),
        IntMatrix::from_columns(&tran_cols, n * n),
    )?;
    let act_e: Vec<IntMatrix> = (0..n).map(|k| a.mul_hom(&add.generator(k)).matrix().clone()).collect();
    let act_g: Vec<IntMatrix> = act_e.iter().map(|m| IntMatrix::identity(n).kron(m)).collect();
    let module = MackeyModule::new(mackey, a.clone(), act_e, act_g)?;
    let alpha = GroupHom::new(add.clone(), g, IntMatrix::from_columns(&alpha_cols, n * n))?;
    Ok(Pi0ThrPresentation { ring: a.clone(), module, alpha, t_generators })
}

/// The map of presentations induced by a ring map: `f` on the e-level and
/// `x ⊗ y ↦ f(x) ⊗ f(y)` on the g-level.
pub fn pi0_thr_map(f: &RingHom) -> Result<MackeyHom> {
    let pa = pi0_thr(f.source())?;
    let pb = pi0_thr(f.target())?;
    let fm = f.additive().matrix();
    let f_e = GroupHom::new(pa.mackey().e_level().clone(), pb.mackey().e_level().clone(), fm.clone())?;
    let f_g = GroupHom::new(pa.mackey().g_level().clone(), pb.mackey().g_level().clone(), fm.kron(fm))?;
    MackeyHom::new(pa.mackey().clone(), pb.mackey().clone(), f_e, f_g)
}

/// `A/2 ⊗_{φ, A/2, φ} A/2`: the quotient of `A/2 ⊗ A/2` by
/// `φ(c)x ⊗ y − x ⊗ φ(c)y` for generators `c, x, y`.
pub fn frobenius_twisted_square(a: &InvolutiveRing) -> Result<FgAbGroup> {
    let r = a.mod2();
    let phi = r.frobenius()?;
    let add = r.additive();
    let n = r.n_gens();
    let mut rels = Vec::with_capacity(n * n * n);
    for k in 0..n {
        let pc = phi.apply(&add.generator(k));
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (add.generator(i), add.generator(j));
                rels.push(sub(&add.tensor_elements(add, &r.mul(&pc, &x), &y), &add.tensor_elements(add, &x, &r.mul(&pc, &y))));
            }
        }
    }
    Ok(add.tensor(add).quotient_by(&rels))
}

/// Outcome of the short exact sequence `0 → 2A → (A⊗A)/T_A → A/2 ⊗_φ A/2 → 0`.
#[derive(Clone, Debug, Serialize)]
pub struct SesReport {
    pub two_a: Invariants,
    pub fixed_level: Invariants,
    pub twisted_square: Invariants,
    pub inclusion_injective: bool,
    pub exactness: ExactnessReport,
    pub exact: bool,
}

pub fn ses_check(a: &InvolutiveRing) -> Result<SesReport> {
    let p = pi0_thr(a)?;
    let add = a.additive();
    let n = a.n_gens();
    let g = p.mackey().g_level().clone();
    let (two_a, inc) = GroupHom::scalar(add, 2).image();
    let cols: Vec<Vec<BigInt>> =
        (0..two_a.n_gens()).map(|k| add.tensor_elements(add, &inc.matrix().col(k), a.one())).collect();
    let i = GroupHom::new(two_a.clone(), g.clone(), IntMatrix::from_columns(&cols, n * n))?;
    let tw = frobenius_twisted_square(a)?;
    let proj = GroupHom::new(g.clone(), tw.clone(), IntMatrix::identity(n * n))?;
    let exactness = is_short_exact(&i, &proj)?;
    let inclusion_injective = i.is_injective();
    if !exactness.exact {
        return Err(Error::Internal(format!("the Frobenius sequence is not exact: {exactness:?}")));
    }
    Ok(SesReport {
        two_a: two_a.invariants().clone(),
        fixed_level: g.invariants().clone(),
        twisted_square: tw.invariants().clone(),
        inclusion_injective,
        exact: exactness.exact,
        exactness,
    })
}

/// Whether `α` is an isomorphism, cross-checked against surjectivity of the
/// Frobenius on `A/2`.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaVerdict {
    pub alpha_iso: bool,
    pub frobenius_surjective: bool,
}

pub fn is_alpha_iso(a: &InvolutiveRing) -> Result<AlphaVerdict> {
    let p = pi0_thr(a)?;
    let alpha_iso = p.alpha.is_iso();
    let frobenius_surjective = a.mod2().frobenius()?.is_surjective();
    if alpha_iso != frobenius_surjective {
        return Err(Error::Internal(format!(
            "alpha iso = {alpha_iso} disagrees with Frobenius surjective = {frobenius_surjective}"
        )));
    }
    Ok(AlphaVerdict { alpha_iso, frobenius_surjective })
}

/// Comparison of the base-changed Mackey functor with the one of the target ring.
#[derive(Clone, Debug, Serialize)]
pub struct EtaleReport {
    pub base_changed: MackeySummary,
    pub target: MackeySummary,
    pub iso: bool,
    pub obstruction: Option<String>,
    /// Inverse of the comparison on each level, when it is an isomorphism.
    pub inverse_e: Option<IntMatrix>,
    pub inverse_g: Option<IntMatrix>,
}

/// Compares `π₀THR(A) ⊗_A B` with `π₀THR(B)` through the map induced by
/// multiplication: `a ⊗ b ↦ f(a)b` and `(x ⊗ y) ⊗ b ↦ f(x) ⊗ f(y)b`.
/// Whether the map is étale is the caller's claim; the report only says
/// whether the comparison is an isomorphism.
pub fn verify_etale_base_change(f: &RingHom) -> Result<EtaleReport> {
    let (a, b) = (f.source(), f.target());
    let pa = pi0_thr(a)?;
    let pb = pi0_thr(b)?;
    let bc = pa.module.base_change(f)?;
    let (na, nb) = (a.n_gens(), b.n_gens());
    let badd = b.additive();
    let e_cols: Vec<Vec<BigInt>> = (0..na * nb)
        .map(|idx| b.mul(&f.apply(&a.additive().generator(idx / nb)), &badd.generator(idx % nb)))
        .collect();
    let g_cols: Vec<Vec<BigInt>> = (0..na * na * nb)
        .map(|idx| {
            let (xy, k) = (idx / nb, idx % nb);
            let (x, y) = (xy / na, xy % na);
            let fx = f.apply(&a.additive().generator(x));
            let fy = f.apply(&a.additive().generator(y));
            badd.tensor_elements(badd, &fx, &b.mul(&fy, &badd.generator(k)))
        })
        .collect();
    let src = bc.mackey();
    let tgt = pb.mackey();
    let f_e = GroupHom::new(src.e_level().clone(), tgt.e_level().clone(), IntMatrix::from_columns(&e_cols, nb))?;
    let f_g = GroupHom::new(src.g_level().clone(), tgt.g_level().clone(), IntMatrix::from_columns(&g_cols, nb * nb))?;
    let cmp = MackeyHom::new(src.clone(), tgt.clone(), f_e, f_g)?;
    let iso = cmp.is_iso();
    let (mut inverse_e, mut inverse_g, mut obstruction) = (None, None, None);
    if iso {
        let inv = cmp.inverse()?;
        inverse_e = Some(inv.f_e().matrix().clone());
        inverse_g = Some(inv.f_g().matrix().clone());
    } else {
        let mut parts = Vec::new();
        for (label, s, t, h) in [
            ("e-level", src.e_level(), tgt.e_level(), cmp.f_e()),
            ("g-level", src.g_level(), tgt.g_level(), cmp.f_g()),
        ] {
            if s.invariants() != t.invariants() {
                parts.push(format!("{label}: {} vs {}", s.invariants(), t.invariants()));
            } else if !h.is_iso() {
                parts.push(format!("{label}: comparison map is not bijective"));
            }
        }
        obstruction = Some(parts.join("; "));
    }
    Ok(EtaleReport { base_changed: src.summary(), target: tgt.summary(), iso, obstruction, inverse_e, inverse_g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::{bigvec, Lattice};

    fn span(g: &FgAbGroup, elems: &[Vec<BigInt>]) -> Lattice {
        Lattice::from_generators(
            g.n_gens(),
            elems.iter().cloned().chain(g.relations().row_iter().map(<[BigInt]>::to_vec)),
        )
    }

    /// Oracle: T_A spanned by both families over all element triples.
    fn brute_force_t(a: &InvolutiveRing) -> Vec<Vec<BigInt>> {
        let els = a.additive().elements().unwrap();
        let mut out = Vec::new();
        for c in &els {
            let c2 = a.square(c);
            let twoc = scale(c, 2);
            for x in &els {
                for y in &els {
                    out.push(t_element(a, x, y, &c2));
                    out.push(t_element(a, x, y, &twoc));
                }
            }
        }
        out
    }

    #[test]
    fn generator_families_span_the_full_ideal() {
        let rings = [
            InvolutiveRing::f2(),
            InvolutiveRing::cyclic(4),
            InvolutiveRing::f4(),
            InvolutiveRing::f2_dual(),
            InvolutiveRing::dual_numbers(4),
            InvolutiveRing::f2().product(&InvolutiveRing::f2()),
            InvolutiveRing::cyclic(8),
        ];
        for a in rings {
            let t = a.additive().tensor(a.additive());
            let small = span(&t, &t_ideal_generators(&a).unwrap());
            let full = span(&t, &brute_force_t(&a));
            assert!(small.contains_lattice(&full) && full.contains_lattice(&small), "{a:?}");
        }
    }

    #[test]
    fn t_generators_vanish_for_cyclic_rings() {
        for a in [InvolutiveRing::integers(), InvolutiveRing::f2(), InvolutiveRing::cyclic(4)] {
            let t = a.additive().tensor(a.additive());
            assert!(t_ideal_generators(&a).unwrap().iter().all(|v| t.is_zero_element(v)));
        }
    }

    #[test]
    fn integers_give_the_constant_functor() {
        let p = pi0_thr(&InvolutiveRing::integers()).unwrap();
        let m = p.mackey();
        assert_eq!(m.g_level().invariants(), &Invariants::free(1));
        assert_eq!(m.res().matrix(), &IntMatrix::identity(1));
        assert_eq!(m.tran().matrix(), &IntMatrix::diagonal(&[2]));
        assert!(p.alpha.is_iso());
    }

    #[test]
    fn f2_and_dual_numbers() {
        let p = pi0_thr(&InvolutiveRing::f2()).unwrap();
        assert_eq!(p.mackey().g_level().order(), Some(BigInt::from(2)));
        assert!(p.mackey().tran().is_zero());
        assert!(p.alpha.is_iso());

        let d = InvolutiveRing::f2_dual();
        let p = pi0_thr(&d).unwrap();
        assert_eq!(p.mackey().g_level().invariants().torsion, bigvec(&[2, 2, 2, 2]));
        assert!(!p.alpha.is_surjective());
    }

    #[test]
    fn twisted_squares() {
        assert_eq!(frobenius_twisted_square(&InvolutiveRing::integers()).unwrap().order(), Some(BigInt::from(2)));
        assert_eq!(frobenius_twisted_square(&InvolutiveRing::f4()).unwrap().order(), Some(BigInt::from(4)));
        assert_eq!(frobenius_twisted_square(&InvolutiveRing::f2_dual()).unwrap().order(), Some(BigInt::from(16)));
    }

    #[test]
    fn ses_examples() {
        let r = ses_check(&InvolutiveRing::integers()).unwrap();
        assert!(r.exact && r.inclusion_injective);
        assert_eq!(r.twisted_square.torsion, bigvec(&[2]));
        let r = ses_check(&InvolutiveRing::f2_dual()).unwrap();
        assert!(r.two_a.is_trivial() && r.exact);
        assert!(ses_check(&InvolutiveRing::cyclic(4)).unwrap().exact);
    }

    #[test]
    fn alpha_verdicts() {
        assert!(is_alpha_iso(&InvolutiveRing::integers()).unwrap().alpha_iso);
        assert!(is_alpha_iso(&InvolutiveRing::f4()).unwrap().alpha_iso);
        assert!(!is_alpha_iso(&InvolutiveRing::f2_dual()).unwrap().alpha_iso);
    }

    #[test]
    fn etale_examples() {
        let f2 = InvolutiveRing::f2();
        let to_f4 = RingHom::new(f2.clone(), InvolutiveRing::f4(), IntMatrix::from_rows(&[vec![1], vec![0]])).unwrap();
        let r = verify_etale_base_change(&to_f4).unwrap();
        assert!(r.iso);
        let to_dual =
            RingHom::new(f2.clone(), InvolutiveRing::f2_dual(), IntMatrix::from_rows(&[vec![1], vec![0]])).unwrap();
        let r = verify_etale_base_change(&to_dual).unwrap();
        assert!(!r.iso);
        assert_eq!(r.base_changed.g_level.torsion, bigvec(&[2, 2]));
        assert_eq!(r.target.g_level.torsion, bigvec(&[2, 2, 2, 2]));
        let z = InvolutiveRing::integers();
        assert!(verify_etale_base_change(&RingHom::identity(&z)).unwrap().iso);
    }

    #[test]
    fn nontrivial_involution_is_rejected() {
        assert!(matches!(pi0_thr(&InvolutiveRing::gaussian()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn functoriality() {
        let f2 = InvolutiveRing::f2();
        let f = RingHom::new(f2.clone(), InvolutiveRing::f4(), IntMatrix::from_rows(&[vec![1], vec![0]])).unwrap();
        assert!(pi0_thr_map(&f).is_ok());
        let z = InvolutiveRing::integers();
        let red = RingHom::new(z, InvolutiveRing::cyclic(4), IntMatrix::identity(1)).unwrap();
        assert!(pi0_thr_map(&red).is_ok());
    }
}
