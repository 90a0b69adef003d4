//! Truncated simplicial sets with cyclic, real and dihedral structure, built
//! from nerves of affine monoids.

mod nerve;
mod trunc;

pub use nerve::{
    check_iso, circle_model, circle_model_to, constant_real_set, dihedral_nerve_piece, dihedral_nerve_piece_windowed,
    point, power_map_fixed_iso_check, product, product_simplex, real_nerve, shuffle_iso_check,
    sigma_integers_fixed_edges, sigma_piece_iso_check, DegreeWitness, IsoWitness, PowerMapWitness,
};
pub use trunc::{
    pi0_windowed, validate_structure, Formulas, LevelAction, Pi0, Simplex, TruncSet, ValidationReport, Violation,
    WindowedPi0,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::involutive_algebra::AffineMonoid;

    fn nat_piece(j: i64, q_max: usize) -> TruncSet {
        dihedral_nerve_piece(&AffineMonoid::natural(), &[vec![j]], q_max).unwrap()
    }

    #[test]
    fn weight_zero_piece_is_a_point() {
        let x = nat_piece(0, 3);
        assert_eq!((0..=3).map(|q| x.count(q)).collect::<Vec<_>>(), vec![1; 4]);
        assert_eq!(x.nondegenerate_counts(), vec![1, 0, 0, 0]);
        assert!(validate_structure(&x).ok);
    }

    #[test]
    fn weight_two_nondegenerate_counts() {
        let x = nat_piece(2, 3);
        assert_eq!(x.nondegenerate_counts(), vec![1, 2, 1, 0]);
        let nd: Vec<_> = x.nondegenerate(1).iter().map(|&k| x.simplices(1)[k].clone()).collect();
        assert_eq!(nd, vec![vec![0, 2], vec![1, 1]]);
        assert_eq!(x.simplices(2)[x.nondegenerate(2)[0]], vec![0, 1, 1]);
    }

    #[test]
    fn degeneracy_matches_zero_entry_criterion() {
        let x = nat_piece(3, 4);
        for q in 0..=4 {
            for (k, s) in x.simplices(q).iter().enumerate() {
                assert_eq!(x.is_degenerate(q, k), s[1..].contains(&0), "{s:?}");
            }
        }
    }

    #[test]
    fn euler_characteristic_vanishes() {
        for j in 1..=6 {
            let x = nat_piece(j, j as usize + 1);
            let chi: i64 = x.nondegenerate_counts().iter().enumerate().map(|(q, &c)| if q % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
            assert_eq!(chi, 0, "j = {j}");
        }
    }

    #[test]
    fn structure_checks_pass() {
        assert!(validate_structure(&nat_piece(3, 4)).ok);
        assert!(validate_structure(&point(3)).ok);
        assert!(validate_structure(&circle_model()).ok);
        let swap = AffineMonoid::natural_square_swap();
        let x = dihedral_nerve_piece(&swap, &[vec![1, 0], vec![0, 1]], 3).unwrap();
        let report = validate_structure(&x);
        assert!(report.ok, "{report:?}");
        assert!(report.checks > 100);
    }

    #[test]
    fn corrupted_involution_is_pinpointed() {
        let mut x = nat_piece(2, 3);
        x.corrupt_involution(1, 0, 1);
        let report = validate_structure(&x);
        assert!(!report.ok);
        let v = report.first_violation.unwrap();
        assert_eq!(v.degree, 1);
        assert!(v.identity.contains('w'), "{}", v.identity);
    }

    #[test]
    fn integers_are_rejected() {
        let z = AffineMonoid::integers();
        assert!(matches!(dihedral_nerve_piece(&z, &[vec![0]], 1), Err(Error::Infinite(_))));
        assert_eq!(dihedral_nerve_piece(&z, &[vec![0]], 0).unwrap().count(0), 1);
    }

    #[test]
    fn real_nerve_window() {
        let x = real_nerve(&AffineMonoid::natural(), 2, Some(2)).unwrap();
        assert_eq!((0..=2).map(|q| x.count(q)).collect::<Vec<_>>(), vec![1, 3, 6]);
        assert!(x.simplices(2).iter().all(|s| s.iter().sum::<i64>() <= 2));
        assert!(validate_structure(&x).ok);
        for q in 0..=2 {
            for k in 0..x.count(q) {
                let w = x.involution(q, k).unwrap();
                assert_eq!(x.involution(q, w), Some(k));
            }
        }
        let t = real_nerve(&AffineMonoid::trivial(), 3, None).unwrap();
        assert_eq!(t.nondegenerate_counts(), vec![1, 0, 0, 0]);
        assert!(matches!(real_nerve(&AffineMonoid::natural(), 2, None), Err(Error::Infinite(_))));
    }

    #[test]
    fn circle_has_one_cell_in_each_low_degree() {
        let c = circle_model();
        assert_eq!(c.nondegenerate_counts(), vec![1, 1, 0, 0]);
        let e = c.nondegenerate(1)[0];
        assert_eq!(c.involution(1, e), Some(e));
    }

    #[test]
    fn real_subdivision_examples() {
        let p = point(3).sd_sigma().unwrap();
        assert_eq!(p.q_max(), 1);
        assert_eq!((p.count(0), p.count(1)), (1, 1));
        let x = nat_piece(2, 5);
        let sd = x.sd_sigma().unwrap();
        assert_eq!(sd.q_max(), 2);
        assert_eq!(sd.simplices(0), &[vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert!(validate_structure(&sd).ok);
    }

    #[test]
    fn subdivided_faces_follow_the_unfolded_formulas() {
        let x = nat_piece(6, 3);
        let sd = x.sd_sigma().unwrap();
        for (k, s) in sd.simplices(1).iter().enumerate() {
            let (x0, x1, x2, x3) = (s[0], s[1], s[2], s[3]);
            assert_eq!(sd.simplices(0)[sd.face(1, k, 0)], vec![x3 + x0 + x1, x2]);
            assert_eq!(sd.simplices(0)[sd.face(1, k, 1)], vec![x0, x1 + x2 + x3]);
        }
        let b = real_nerve(&AffineMonoid::natural(), 3, Some(4)).unwrap().sd_sigma().unwrap();
        for (k, s) in b.simplices(1).iter().enumerate() {
            assert_eq!(b.simplices(0)[b.face(1, k, 0)], vec![s[1]]);
            assert_eq!(b.simplices(0)[b.face(1, k, 1)], vec![s[0] + s[1] + s[2]]);
        }
    }

    #[test]
    fn one_fold_subdivision_is_the_identity() {
        let x = nat_piece(3, 3);
        let y = x.sd_r(1).unwrap();
        assert_eq!(y.q_max(), 3);
        for q in 0..=3 {
            assert_eq!(x.simplices(q), y.simplices(q));
            for k in 0..x.count(q) {
                assert_eq!(y.action().unwrap().generator[q][k] as usize, k);
                if q > 0 {
                    for i in 0..=q {
                        assert_eq!(x.face(q, k, i), y.face(q, k, i));
                    }
                }
            }
        }
    }

    #[test]
    fn cyclic_subdivision_is_valid() {
        let y = nat_piece(4, 5).sd_r(2).unwrap();
        assert_eq!(y.q_max(), 2);
        assert!(validate_structure(&y).ok);
        let z = nat_piece(3, 5).sd_r(3).unwrap();
        assert!(validate_structure(&z).ok);
    }

    #[test]
    fn fixed_points_of_real_subdivision() {
        let f = nat_piece(2, 5).sd_sigma().unwrap().fixed_subset().unwrap();
        assert_eq!(f.simplices(0), &[vec![0, 2], vec![1, 1], vec![2, 0]]);
        let mut expected = Vec::new();
        for x0 in 0..=2i64 {
            for x1 in 0..=1i64 {
                for x2 in 0..=2i64 {
                    if x0 + 2 * x1 + x2 == 2 {
                        expected.push(vec![x0, x1, x2, x1]);
                    }
                }
            }
        }
        expected.sort();
        assert_eq!(f.simplices(1), expected.as_slice());
        assert!(validate_structure(&f).ok);
    }

    #[test]
    fn fixed_points_of_trivial_and_free_involutions() {
        let triv = constant_real_set(&[0, 1, 2], &|a| a, 3).unwrap().sd_sigma().unwrap();
        let f = triv.fixed_subset().unwrap();
        assert_eq!(f.count(0), triv.count(0));
        assert_eq!(f.count(1), triv.count(1));
        let free = constant_real_set(&[-1, 1], &|a| -a, 3).unwrap().sd_sigma().unwrap().fixed_subset().unwrap();
        assert_eq!((free.count(0), free.count(1)), (0, 0));
    }

    #[test]
    fn fixed_points_have_two_components_by_parity() {
        for j in 1..=5 {
            let f = nat_piece(j, 3).sd_sigma().unwrap().fixed_subset().unwrap();
            let p = f.pi0();
            assert_eq!(p.count, 2, "j = {j}");
            for class in &p.classes {
                let parity = class[0][0].rem_euclid(2);
                assert!(class.iter().all(|v| v[0].rem_euclid(2) == parity));
            }
        }
        assert_eq!(point(2).pi0().count, 1);
    }

    #[test]
    fn windowed_components_of_integer_fixed_points() {
        let r = pi0_windowed(&sigma_integers_fixed_edges, 4);
        assert!(r.stabilized);
        assert_eq!(r.count, 2);
        for &(x, c) in &r.inner_classes {
            assert_eq!(c, usize::from(x.rem_euclid(2) != (-4i64).rem_euclid(2)));
        }
        // A graph whose classes keep merging as the window grows is not certified.
        let drifting = |b: i64| vec![(-b, b)];
        assert!(!pi0_windowed(&drifting, 2).stabilized);
    }

    #[test]
    fn power_map_examples() {
        let w = power_map_fixed_iso_check(1, 2, 2).unwrap();
        assert!(w.ok, "{w:?}");
        for r in 1..=3 {
            let p = power_map_fixed_iso_check(0, r, 2).unwrap();
            assert!(p.ok);
            assert!(p.iso.degrees.iter().all(|d| d.source == 1 && d.target == 1));
        }
        let odd = dihedral_nerve_piece(&AffineMonoid::natural(), &[vec![3]], 3).unwrap().sd_r(2).unwrap().fixed_subset().unwrap();
        assert_eq!((odd.count(0), odd.count(1)), (0, 0));
    }

    #[test]
    fn shuffle_examples() {
        let n = AffineMonoid::natural();
        let w = shuffle_iso_check(&n, &n, &[vec![1]], &[vec![1]], 3, None).unwrap();
        assert!(w.ok, "{w:?}");
        let t = AffineMonoid::trivial();
        let w = shuffle_iso_check(&n, &t, &[vec![2]], &[vec![]], 3, None).unwrap();
        assert!(w.ok);
        assert!(w.degrees.iter().all(|d| d.source == d.target));
        let z = AffineMonoid::integers_sigma();
        let w = shuffle_iso_check(&n, &z, &[vec![2]], &[vec![0]], 2, Some(3)).unwrap();
        assert!(w.ok, "{w:?}");
    }

    #[test]
    fn sigma_piece_splits() {
        for window in 1..=3 {
            let w = sigma_piece_iso_check(window, 2).unwrap();
            assert!(w.ok, "{w:?}");
        }
        let x = dihedral_nerve_piece_windowed(&AffineMonoid::integers_sigma(), &[vec![1], vec![-1]], 2, 2).unwrap();
        assert!(validate_structure(&x).ok);
    }

    #[test]
    fn weight_pieces_partition_the_nerve() {
        // Brute force over all tuples with total weight at most 3.
        for q in 0..=3usize {
            let mut all = Vec::new();
            let mut cur = vec![0i64; q + 1];
            loop {
                if cur.iter().sum::<i64>() <= 3 {
                    all.push(cur.clone());
                }
                let mut k = 0;
                while k <= q && cur[k] == 3 {
                    cur[k] = 0;
                    k += 1;
                }
                if k > q {
                    break;
                }
                cur[k] += 1;
            }
            all.sort();
            let mut union: Vec<Vec<i64>> = (0..=3).flat_map(|j| nat_piece(j, 3).simplices(q).to_vec()).collect();
            let n = union.len();
            union.sort();
            union.dedup();
            assert_eq!(n, union.len());
            assert_eq!(union, all);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn pieces_of_the_swap_square_are_valid(a in 0i64..3, b in 0i64..3) {
                let m = AffineMonoid::natural_square_swap();
                let mut orbit = vec![vec![a, b], vec![b, a]];
                orbit.dedup();
                let x = dihedral_nerve_piece(&m, &orbit, 3).unwrap();
                prop_assert!(validate_structure(&x).ok);
                let sd = x.sd_sigma().unwrap();
                prop_assert!(validate_structure(&sd).ok);
                prop_assert!(validate_structure(&sd.fixed_subset().unwrap()).ok);
            }

            #[test]
            fn subdivisions_of_natural_pieces_are_valid(j in 0i64..5, r in 1usize..4) {
                let x = nat_piece(j, 2 * r + 1);
                let y = x.sd_r(r).unwrap();
                prop_assert!(validate_structure(&y).ok);
                prop_assert!(validate_structure(&y.fixed_subset().unwrap()).ok);
            }
        }
    }
}
