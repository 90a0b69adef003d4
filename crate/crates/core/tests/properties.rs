use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use thr_core::dihedral::{dihedral_nerve_piece, validate_structure};
use thr_core::fgab::{minor_gcd, snf};
use thr_core::homology::{normalized_chains, ChainComplex};
use thr_core::thr_pi0::{is_alpha_iso, pi0_thr, ses_check};
use thr_core::{AffineMonoid, FgAbGroup, GroupHom, IntMatrix, InvolutiveRing, MackeyZ2};

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
            .prop_map(move |rows| IntMatrix::from_rows_with_cols(&rows, c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(m in matrix(6, 20)) {
        let r = snf(&m);
        prop_assert_eq!(r.u.mul(&m).mul(&r.v), r.s.clone());
        prop_assert!(r.u.determinant().abs().is_one());
        prop_assert_eq!(r.v.mul(&r.v_inv), IntMatrix::identity(m.cols()));
        let d = r.diagonal();
        prop_assert!(d.iter().all(|x| x.is_positive()));
        prop_assert!(d.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        if let Some(first) = d.first() {
            prop_assert_eq!(first, &minor_gcd(&m, 1));
        }
    }

    #[test]
    fn cyclic_tensor_is_the_gcd(a in 1u64..40, b in 1u64..40) {
        let t = FgAbGroup::cyclic(a).tensor(&FgAbGroup::cyclic(b));
        prop_assert_eq!(t.order(), Some(BigInt::from(a.gcd(&b))));
    }

    #[test]
    fn multiplication_on_a_cyclic_group(n in 2u64..60, k in -30i64..30) {
        let g = FgAbGroup::cyclic(n);
        let f = GroupHom::scalar(&g, k);
        let expected = BigInt::from(k).gcd(&BigInt::from(n));
        let expected = if expected.is_zero() { BigInt::from(n) } else { expected };
        prop_assert_eq!(f.kernel().0.order(), Some(expected.clone()));
        prop_assert_eq!(f.cokernel().0.order(), Some(expected));
    }

    #[test]
    fn euler_characteristic_matches_homology(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 2)) {
        let c = ChainComplex::new(0, vec![2, 3], vec![IntMatrix::from_rows_with_cols(&rows, 3)], None).unwrap();
        let cc = c.tensor(&c);
        for x in [&c, &cc] {
            let chi: i64 = x
                .homology_table()
                .unwrap()
                .iter()
                .map(|e| if e.degree % 2 == 0 { e.group.free_rank as i64 } else { -(e.group.free_rank as i64) })
                .sum();
            prop_assert_eq!(chi, x.euler_characteristic());
        }
    }

    #[test]
    fn standard_mackey_functors_satisfy_double_coset(orders in prop::collection::vec(prop::sample::select(vec![0u64, 2, 3, 4, 5, 6]), 0..4)) {
        let g = FgAbGroup::from_orders(&orders);
        for m in [MackeyZ2::constant(&g), MackeyZ2::induced(&g)] {
            prop_assert!(m.double_coset_holds());
            prop_assert!(m.direct_sum(&m).double_coset_holds());
        }
    }

    #[test]
    fn cyclic_rings_have_alpha_iso(n in 2u64..30) {
        let r = InvolutiveRing::cyclic(n);
        prop_assert!(pi0_thr(&r).unwrap().mackey().double_coset_holds());
        prop_assert!(is_alpha_iso(&r).unwrap().alpha_iso);
        prop_assert!(ses_check(&r).unwrap().exact);
    }

    #[test]
    fn dual_numbers_have_exact_frobenius_sequence(n in 2u64..10) {
        let r = InvolutiveRing::dual_numbers(n);
        let ses = ses_check(&r).unwrap();
        prop_assert!(ses.exact && ses.inclusion_injective);
        // Over Z/n[t]/t^2 the Frobenius on A/2 kills t, so alpha is an iso iff n is odd.
        prop_assert_eq!(is_alpha_iso(&r).unwrap().alpha_iso, n % 2 == 1);
    }

    #[test]
    fn swapped_square_pieces_are_well_formed(a in 0i64..3, b in 0i64..3) {
        let m = AffineMonoid::natural_square_swap();
        let x = dihedral_nerve_piece(&m, &[vec![a, b], vec![b, a]], 3).unwrap();
        let v = validate_structure(&x);
        prop_assert!(v.ok, "{:?}", v.first_violation);
        let h0 = &normalized_chains(&x).homology_table().unwrap()[0];
        prop_assert!(h0.group.free_rank >= 1);
    }
}

#[test]
fn natural_pieces_match_the_circle_shadow() {
    for j in 1..=4i64 {
        let x = dihedral_nerve_piece(&AffineMonoid::natural(), &[vec![j]], j as usize + 1).unwrap();
        let table = normalized_chains(&x).homology_table().unwrap();
        let ranks: Vec<usize> = table.iter().map(|e| e.group.free_rank).collect();
        assert_eq!(&ranks[..2], &[1, 1], "weight {j}");
        assert!(table[2..].iter().all(|e| e.group.is_trivial()), "weight {j}");
        assert_eq!(x.sd_sigma().unwrap().fixed_subset().unwrap().pi0().count, 2);
    }
}
