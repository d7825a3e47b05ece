//! Randomised invariants checked against the brute-force oracles.

use std::collections::BTreeSet;

use mixdecomp::decomposition::full_chain_seeded;
use mixdecomp::family::{FamilyKind, SubsetFamily};
use mixdecomp::gen::sum_is_full_dim;
use mixdecomp::mixedvolume::{mixed_cell_volume, mixed_volume, MvMethod};
use mixdecomp::oracle;
use mixdecomp::subdivision::MixedSubdivision;
use mixdecomp::tropical::{discrete_mixed_volume, kouchnirenko};
use mixdecomp::{Polytope, Rational, Support};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `r` supports of 1 to 5 distinct lattice points in `[0, 5]^n`.
fn supports(n: usize, r: usize) -> impl Strategy<Value = Vec<Support>> {
    let point = proptest::collection::vec(0i64..=5, n);
    let set = proptest::collection::btree_set(point, 1..=5);
    proptest::collection::vec(set, r).prop_map(|sets: Vec<BTreeSet<Vec<i64>>>| {
        sets.into_iter()
            .enumerate()
            .map(|(i, s)| {
                let pts: Vec<&[i64]> = s.iter().map(Vec::as_slice).collect();
                Support::from_ints(i + 1, &pts).unwrap()
            })
            .collect()
    })
}

fn square(max_n: usize) -> impl Strategy<Value = Vec<Support>> {
    (1..=max_n).prop_flat_map(|n| supports(n, n))
}

fn any_shape() -> impl Strategy<Value = Vec<Support>> {
    (1usize..=2, 1usize..=3).prop_flat_map(|(n, r)| supports(n, r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dmv_matches_oracle_and_kouchnirenko(s in any_shape()) {
        let d = discrete_mixed_volume(&s).unwrap();
        prop_assert_eq!(d, oracle::dmv(&s).unwrap());
        prop_assert!(d <= kouchnirenko(&s));
    }

    #[test]
    fn dmv_nonnegative_when_r_at_most_n(s in (1usize..=2).prop_flat_map(|n| (1..=n).prop_flat_map(move |r| supports(n, r)))) {
        prop_assert!(discrete_mixed_volume(&s).unwrap() >= 0);
    }

    #[test]
    fn mixed_volume_methods_match_oracles(s in square(2), seed in any::<u64>()) {
        let polys: Vec<Polytope> = s.iter().map(|x| Polytope::from_points(x.points()).unwrap()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let want = oracle::mv(&s).unwrap();
        prop_assert_eq!(Rational::from_int(oracle::lattice_mv(&s).unwrap()), want.clone());
        for m in MvMethod::ALL {
            prop_assert_eq!(mixed_volume(&polys, m, &mut rng).unwrap(), want.clone(), "{}", m);
        }
    }

    #[test]
    fn cells_tile_the_sum(s in square(2), seed in any::<u64>()) {
        prop_assume!(sum_is_full_dim(&s));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sub = MixedSubdivision::generic(s.clone(), false, &mut rng).unwrap();
        prop_assert!(sub.is_pure());
        let total: Rational = sub.cells().iter().map(|c| c.total().volume()).sum();
        prop_assert_eq!(total, sub.carrier().volume());
        prop_assert_eq!(mixed_cell_volume(&sub), oracle::mv(&s).unwrap());
        prop_assert!((sub.mixed_cells().count() as i64) <= discrete_mixed_volume(&s).unwrap());
    }

    #[test]
    fn signed_identity_and_chain_agree(s in any_shape(), seed in any::<u64>()) {
        prop_assume!(sum_is_full_dim(&s));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sub = MixedSubdivision::generic(s.clone(), true, &mut rng).unwrap();
        for kind in [FamilyKind::Minkowski, FamilyKind::Lattice, FamilyKind::Vertices] {
            let fam = SubsetFamily::build(kind, &s, Some(&sub)).unwrap();
            let c = full_chain_seeded(&fam, &sub, &mut rng).unwrap();
            prop_assert!(c.step.signed_identity_holds(), "{}", kind);
            prop_assert!(c.recursion_agrees(), "{}", kind);
            prop_assert!(c.terminal_agrees(), "{}", kind);
            if s.len() <= 2 {
                prop_assert!(c.step.set_identity_holds(), "{}", kind);
                prop_assert!(c.non_increasing(), "{}", kind);
            }
        }
    }
}
