//! The acceptance suite: one verdict per criterion, shared by the test
//! target and the `selftest` subcommand. Random inputs come from a fixed
//! seed, so every run checks the same instances.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cubes::{h_map_cofiber_check, p1_report, pn_report, psigma_report, tfib_recursion_check, CubeDiagram, default_spot_weight};
use crate::dihedral::{
    circle_model, dihedral_nerve_piece, dihedral_nerve_piece_windowed, point, power_map_fixed_iso_check, product,
    real_nerve, shuffle_iso_check, validate_structure, TruncSet,
};
use crate::error::Result;
use crate::fgab::{minor_gcd, snf, FgAbGroup, GroupHom, IntMatrix, Invariants};
use crate::homology::{les_check, mapping_fiber, normalized_chains, ChainComplex, ChainMap};
use crate::involutive_algebra::{AffineMonoid, InvolutiveRing, RingHom};
use crate::mackey::{MackeyModule, MackeyZ2};
use crate::thr_pi0::{is_alpha_iso, pi0_thr, ses_check, verify_etale_base_change};

const SEED: u64 = 0x0074_6872_5f61_6363;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2}: {} ({} ms) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_ms,
            self.detail
        )
    }
}

type Check = fn() -> Result<(bool, String)>;

pub const CRITERIA: [(u32, &str, Check); 10] = [
    (1, "pi0 THR(Z) is the constant Mackey functor", criterion_1),
    (2, "F2[t]/t^2: g-level, alpha, Frobenius and the exact sequence", criterion_2),
    (3, "etale base change F2 -> F4 and F2 -> F2[t]/t^2", criterion_3),
    (4, "double coset law on generated Mackey functors", criterion_4),
    (5, "N^di(N; j) homology and fixed-point components, j = 1..5", criterion_5),
    (6, "power map on fixed points, 0 <= j <= 3, 1 <= r <= 3", criterion_6),
    (7, "projective line weights, J = 5", criterion_7),
    (8, "sign-twisted projective line: Q cartesian, mutation detected", criterion_8),
    (9, "projective spaces n = 2, 3 and the smash-power cofibers", criterion_9),
    (10, "structural property suites", criterion_10),
];

/// Runs one criterion; errors count as failures with the error as detail.
pub fn run(id: u32) -> Option<CriterionResult> {
    let &(id, title, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (passed, detail) = match check() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionResult { id, title: title.into(), passed, detail, elapsed_ms: start.elapsed().as_millis() })
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run(c.0)).collect()
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, u128)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_millis()))
}

fn m(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

fn criterion_1() -> Result<(bool, String)> {
    let (p, ms) = timed(|| pi0_thr(&InvolutiveRing::integers()))?;
    let mk = p.mackey();
    let z = Invariants::free(1);
    let levels = mk.e_level().invariants() == &z && mk.g_level().invariants() == &z;
    let maps = mk.res().matrix() == &m(&[vec![1]]) && mk.tran().matrix() == &m(&[vec![2]]) && mk.w().matrix() == &m(&[vec![1]]);
    let constant = MackeyZ2::constant(&FgAbGroup::free(1));
    let same = constant.tran().matrix() == mk.tran().matrix() && constant.res().matrix() == mk.res().matrix();
    let ok = levels && maps && same && ms < 1000;
    Ok((ok, format!("levels Z, Z; res {}; tran {}", mk.res().matrix(), mk.tran().matrix())))
}

/// `(A ⊗ A)/T_A` from every triple of ring elements, not just generators.
fn brute_force_g_level(a: &InvolutiveRing) -> Result<Invariants> {
    let add = a.additive();
    let elems = add.elements()?;
    let mut rels = Vec::new();
    for s in &elems {
        let s2 = a.square(s);
        let two_s: Vec<BigInt> = s.iter().map(|x| x * 2).collect();
        for x in &elems {
            for y in &elems {
                for c in [&s2, &two_s] {
                    let l = add.tensor_elements(add, x, &a.mul(c, y));
                    let r = add.tensor_elements(add, &a.mul(c, x), y);
                    rels.push(l.iter().zip(&r).map(|(p, q)| p - q).collect::<Vec<BigInt>>());
                }
            }
        }
    }
    Ok(add.tensor(add).quotient_by(&rels).invariants().clone())
}

fn criterion_2() -> Result<(bool, String)> {
    let a = InvolutiveRing::f2_dual();
    let ((g, alpha, ses, oracle), ms) = timed(|| {
        let p = pi0_thr(&a)?;
        Ok((p.mackey().g_level().invariants().clone(), is_alpha_iso(&a)?, ses_check(&a)?, brute_force_g_level(&a)?))
    })?;
    let expected = Invariants { free_rank: 0, torsion: vec![BigInt::from(2); 4] };
    let ok = g == expected && oracle == expected && !alpha.alpha_iso && !alpha.frobenius_surjective && ses.exact && ms < 1000;
    Ok((
        ok,
        format!(
            "g-level {g} (oracle {oracle}); alpha iso {}; Frobenius surjective {}; sequence exact {}",
            alpha.alpha_iso, alpha.frobenius_surjective, ses.exact
        ),
    ))
}

fn unit_map(a: &InvolutiveRing, b: &InvolutiveRing) -> Result<RingHom> {
    let cols = vec![b.one().to_vec()];
    RingHom::new(a.clone(), b.clone(), IntMatrix::from_columns(&cols, b.n_gens()))
}

fn criterion_3() -> Result<(bool, String)> {
    let ((f4, dual), ms) = timed(|| {
        let f2 = InvolutiveRing::f2();
        Ok((
            verify_etale_base_change(&unit_map(&f2, &InvolutiveRing::f4())?)?,
            verify_etale_base_change(&unit_map(&f2, &InvolutiveRing::f2_dual())?)?,
        ))
    })?;
    let two = |k: usize| Invariants { free_rank: 0, torsion: vec![BigInt::from(2); k] };
    let obstruction = dual.base_changed.g_level == two(2) && dual.target.g_level == two(4);
    let ok = f4.iso && !dual.iso && obstruction && ms < 1000;
    Ok((
        ok,
        format!(
            "F4 iso {}; F2[t]/t^2 iso {} with g-levels {} vs {}",
            f4.iso, dual.iso, dual.base_changed.g_level, dual.target.g_level
        ),
    ))
}

fn random_group(rng: &mut ChaCha8Rng) -> FgAbGroup {
    let k = rng.gen_range(0..=3);
    let orders: Vec<u64> = (0..k).map(|_| [0u64, 2, 3, 4, 6][rng.gen_range(0..5)]).collect();
    FgAbGroup::from_orders(&orders)
}

/// A random signed-permutation involution on `Z^n`.
fn random_involution(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut w = IntMatrix::zeros(n, n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && rng.gen_bool(0.4) {
            w[(i, i + 1)] = BigInt::one();
            w[(i + 1, i)] = BigInt::one();
            i += 2;
        } else {
            w[(i, i)] = if rng.gen_bool(0.5) { BigInt::one() } else { -BigInt::one() };
            i += 1;
        }
    }
    w
}

/// Mackey functors from every constructor, with the law re-checked on each.
pub fn generated_mackey_functors(count: usize) -> Result<Vec<MackeyZ2>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut rings = vec![
        InvolutiveRing::integers(),
        InvolutiveRing::f2(),
        InvolutiveRing::f4(),
        InvolutiveRing::f2_dual(),
        InvolutiveRing::gaussian(),
    ];
    for n in [2u64, 3, 4, 5, 6, 8, 9] {
        rings.push(InvolutiveRing::cyclic(n));
        rings.push(InvolutiveRing::dual_numbers(n));
    }
    let mut out: Vec<MackeyZ2> = Vec::new();
    for r in &rings {
        if r.has_trivial_involution() {
            out.push(pi0_thr(r)?.mackey().clone());
            out.push(MackeyModule::constant(r)?.mackey().clone());
        }
    }
    for (i, a) in rings.iter().enumerate().take(6) {
        for b in rings.iter().skip(i).take(3).filter(|b| a.has_trivial_involution() && b.has_trivial_involution()) {
            out.push(pi0_thr(&a.product(b))?.mackey().clone());
        }
    }
    for (a, b) in [(InvolutiveRing::f2(), InvolutiveRing::f4()), (InvolutiveRing::f2(), InvolutiveRing::f2_dual())] {
        let f = unit_map(&a, &b)?;
        out.push(pi0_thr(&a)?.module.base_change(&f)?.mackey().clone());
    }
    while out.len() < count {
        let mk = match rng.gen_range(0..4) {
            0 => MackeyZ2::constant(&random_group(&mut rng)),
            1 => MackeyZ2::induced(&random_group(&mut rng)),
            2 => {
                let n = rng.gen_range(1..=4);
                let w = random_involution(&mut rng, n);
                MackeyZ2::fixed_point(&GroupHom::new(FgAbGroup::free(n), FgAbGroup::free(n), w)?)?
            }
            _ => {
                let a = &out[rng.gen_range(0..out.len())];
                let b = &out[rng.gen_range(0..out.len())];
                a.direct_sum(b)
            }
        };
        out.push(mk);
    }
    Ok(out)
}

fn criterion_4() -> Result<(bool, String)> {
    let all = generated_mackey_functors(240)?;
    let bad = all.iter().filter(|m| !m.double_coset_holds()).count();
    Ok((bad == 0 && all.len() >= 200, format!("{} instances, {bad} violations", all.len())))
}

fn nat_piece(j: i64, q_max: usize) -> Result<TruncSet> {
    dihedral_nerve_piece(&AffineMonoid::natural(), &[vec![j]], q_max)
}

fn criterion_5() -> Result<(bool, String)> {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for j in 1..=5i64 {
        let x = nat_piece(j, j as usize + 1)?;
        let table = normalized_chains(&x).homology_table()?;
        let homology_ok = table.iter().all(|e| e.group == Invariants::free(usize::from(e.degree <= 1)));
        let fixed = nat_piece(j, 3)?.sd_sigma()?.fixed_subset()?.pi0().count;
        ok &= homology_ok && fixed == 2;
        parts.push(format!("j={j}: H {} pi0 {fixed}", table.iter().map(|e| e.display.clone()).collect::<Vec<_>>().join(",")));
    }
    let ms = start.elapsed().as_millis();
    Ok((ok && ms < 10_000, parts.join("; ")))
}

fn criterion_6() -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut empty = 0;
    for j in 0..=3usize {
        for r in 1..=3usize {
            let w = power_map_fixed_iso_check(j, r, 3)?;
            if !w.ok {
                failures.push(format!("(j={j}, r={r})"));
            }
            if w.off_weight_fixed > 0 {
                failures.push(format!("(j={j}, r={r}) off-weight fixed simplices"));
            }
            empty += usize::from(j > 0 || r > 1);
        }
    }
    Ok((failures.is_empty(), format!("12 pairs checked, {empty} emptiness checks; failures: {failures:?}")))
}

fn criterion_7() -> Result<(bool, String)> {
    let (r, ms) = timed(|| p1_report(5))?;
    let nonzero: Vec<i64> = r.weights.iter().filter(|w| !w.acyclic).map(|w| w.weight[0]).collect();
    Ok((r.ok && nonzero == vec![0] && ms < 10_000, format!("non-acyclic weights {nonzero:?}")))
}

fn criterion_8() -> Result<(bool, String)> {
    let r = psigma_report()?;
    let tfib: Vec<String> = r.tfib.iter().filter(|e| !e.group.is_trivial()).map(|e| format!("H{}={}", e.degree, e.display)).collect();
    Ok((
        r.q_cartesian && !r.mutation.cartesian,
        format!(
            "rank [right|lower] = {} of 4; tfib(Q) {}; mutant at {:?} cartesian {}",
            r.stacked_rank,
            if tfib.is_empty() { "acyclic".into() } else { tfib.join(" ") },
            r.mutation.entry,
            r.mutation.cartesian
        ),
    ))
}

fn criterion_9() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 2..=3usize {
        let (r, ms) = timed(|| pn_report(n, 3, &[default_spot_weight(n)]))?;
        ok &= r.ok && r.all_nonzero_acyclic && r.zero_detail.assembled_h0_rank == n + 1;
        if n == 3 {
            ok &= ms < 60_000;
        }
        parts.push(format!(
            "n={n}: {} nonzero weights acyclic {}, H0 rank {}",
            r.nonzero_weights.len(),
            r.all_nonzero_acyclic,
            r.zero_detail.assembled_h0_rank
        ));
    }
    for d in 1..=4 {
        let h = h_map_cofiber_check(d)?;
        ok &= h.ok;
    }
    parts.push("cofibers Z^2 in degree d for d = 1..4 checked".into());
    Ok((ok, parts.join("; ")))
}

fn random_complex(rng: &mut ChaCha8Rng) -> Result<ChainComplex> {
    random_complex_bounded(rng, 2)
}

fn random_complex_bounded(rng: &mut ChaCha8Rng, max_rank: usize) -> Result<ChainComplex> {
    let (a, b) = (rng.gen_range(1..=max_rank), rng.gen_range(1..=max_rank));
    let rows: Vec<Vec<i64>> = (0..a).map(|_| (0..b).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    ChainComplex::new(0, vec![a, b], vec![IntMatrix::from_rows_with_cols(&rows, b)], None)
}

fn scalar(c: &ChainComplex, k: i64) -> ChainMap {
    ChainMap::from_fn(c, c, |d| IntMatrix::identity(c.rank(d)).scale(&BigInt::from(k))).expect("scalar map")
}

fn snf_suite(rng: &mut ChaCha8Rng, count: usize) -> usize {
    let mut bad = 0;
    for _ in 0..count {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let a = IntMatrix::from_rows_with_cols(&rows, c);
        let res = snf(&a);
        let diag = res.diagonal();
        let mut good = res.u.mul(&a).mul(&res.v) == res.s
            && res.u.determinant().abs().is_one()
            && res.v.determinant().abs().is_one()
            && diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        let mut prod = BigInt::one();
        for k in 1..=r.min(c) {
            if k <= diag.len() {
                prod *= &diag[k - 1];
            } else {
                prod = BigInt::zero();
            }
            good &= minor_gcd(&a, k) == prod.abs();
        }
        bad += usize::from(!good);
    }
    bad
}

fn structures() -> Result<Vec<TruncSet>> {
    let mut out = vec![point(3), circle_model()];
    for j in 0..=4 {
        let x = nat_piece(j, 4)?;
        out.push(x.sd_sigma()?);
        out.push(x.sd_sigma()?.fixed_subset()?);
        out.push(x.sd_r(2)?);
        out.push(x.sd_r(2)?.fixed_subset()?);
        out.push(x);
    }
    out.push(nat_piece(3, 5)?.sd_r(3)?);
    let swap = AffineMonoid::natural_square_swap();
    out.push(dihedral_nerve_piece(&swap, &[vec![1, 0], vec![0, 1]], 3)?);
    out.push(dihedral_nerve_piece(&swap, &[vec![1, 1]], 3)?);
    out.push(real_nerve(&AffineMonoid::natural(), 3, Some(3))?);
    out.push(real_nerve(&AffineMonoid::integers_sigma(), 2, Some(2))?);
    out.push(dihedral_nerve_piece_windowed(&AffineMonoid::integers_sigma(), &[vec![1], vec![-1]], 2, 2)?);
    out.push(product(&nat_piece(1, 3)?, &nat_piece(2, 3)?)?);
    Ok(out)
}

fn criterion_10() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let mut parts = Vec::new();
    let mut ok = true;

    let objs = structures()?;
    let broken: Vec<String> = objs.iter().map(validate_structure).filter(|r| !r.ok).map(|r| r.label).collect();
    ok &= broken.is_empty();
    parts.push(format!("identities on {} objects, {} broken", objs.len(), broken.len()));

    let mut les_bad = 0;
    for _ in 0..50 {
        let x = random_complex(&mut rng)?;
        let f = if rng.gen_bool(0.5) {
            scalar(&x, rng.gen_range(-3..=3))
        } else {
            let y = random_complex(&mut rng)?;
            let sum = ChainComplex::direct_sum(&[&x, &y]);
            ChainMap::from_fn(&x, &sum, |d| IntMatrix::identity(x.rank(d)).vstack(&IntMatrix::zeros(y.rank(d), x.rank(d))))?
        };
        let seq = mapping_fiber(&f);
        let fib = &seq.fiber;
        let squares = (fib.min_degree()..=fib.max_degree() + 1).all(|d| fib.differential(d - 1).mul(&fib.differential(d)).is_zero());
        les_bad += usize::from(!squares || !les_check(&seq)?.exact);
    }
    ok &= les_bad == 0;
    parts.push(format!("50 mapping fibers, {les_bad} failures"));

    let mut cube_bad = 0;
    for _ in 0..50 {
        let dim = rng.gen_range(1..=3);
        // Rank-2 factors in three directions reach rank 160 per degree; keep those out.
        let max_rank = if dim == 3 { 1 } else { 2 };
        let maps: Vec<ChainMap> = (0..dim)
            .map(|_| random_complex_bounded(&mut rng, max_rank).map(|c| scalar(&c, rng.gen_range(-3..=3))))
            .collect::<Result<_>>()?;
        let cube = CubeDiagram::tensor_of_maps(&maps)?;
        for i in 0..dim {
            cube_bad += usize::from(!tfib_recursion_check(&cube, i)?.ok);
        }
    }
    ok &= cube_bad == 0;
    parts.push(format!("tfib recursion on 50 cubes, {cube_bad} failures"));

    let n = AffineMonoid::natural();
    let shuffles = [
        shuffle_iso_check(&n, &n, &[vec![1]], &[vec![1]], 3, None)?,
        shuffle_iso_check(&n, &AffineMonoid::trivial(), &[vec![2]], &[vec![]], 3, None)?,
        shuffle_iso_check(&n, &AffineMonoid::integers_sigma(), &[vec![2]], &[vec![0]], 2, Some(3))?,
    ];
    let shuffle_bad = shuffles.iter().filter(|w| !w.ok).count();
    ok &= shuffle_bad == 0;
    parts.push(format!("3 shuffle pairs, {shuffle_bad} failures"));

    let snf_bad = snf_suite(&mut rng, 500);
    ok &= snf_bad == 0;
    parts.push(format!("500 SNF instances, {snf_bad} oracle disagreements"));
    Ok((ok, parts.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_agrees_on_small_rings() {
        for r in [InvolutiveRing::f2(), InvolutiveRing::f4(), InvolutiveRing::cyclic(4), InvolutiveRing::dual_numbers(3)] {
            let g = pi0_thr(&r).unwrap().mackey().g_level().invariants().clone();
            assert_eq!(brute_force_g_level(&r).unwrap(), g);
        }
    }

    #[test]
    fn generated_functors_are_deterministic() {
        let a = generated_mackey_functors(60).unwrap();
        let b = generated_mackey_functors(60).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.summary().g_level, y.summary().g_level);
        }
    }

    #[test]
    fn unknown_criterion() {
        assert!(run(11).is_none());
    }
}
