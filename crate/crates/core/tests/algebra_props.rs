mod support;

use proptest::prelude::*;
use sdlimit_core::{partition_measure, refine, AlgebraEvent, Side, ValueSet};
use support::*;

fn refined(event: &mut AlgebraEvent, splits: &[(usize, u64, u64)], space: &sdlimit_core::ValueSpace) {
    for &(piece, coord, mask) in splits {
        if event.pieces().is_empty() {
            return;
        }
        let idx = piece % event.pieces().len();
        let part = ValueSet(mask & space.full().0);
        event.split_piece(idx, coord, part, space).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kappa_matches_point_enumeration(
        (vs, cyl) in value_space().prop_flat_map(|vs| {
            let k = vs.len();
            (Just(vs), cylinder(Side::Theta, k, 5, 4))
        })
    ) {
        let ev = AlgebraEvent::from_cylinder(cyl.clone());
        prop_assert_eq!(cyl.measure(&vs).unwrap(), brute_measure(&ev, &vs, &[]));
    }

    #[test]
    fn partition_invariance(
        (vs, cyl, s1, s2) in value_space().prop_flat_map(|vs| {
            let k = vs.len();
            let splits = proptest::collection::vec((0usize..8, 0u64..6, 0u64..16), 0..6);
            (Just(vs), cylinder(Side::Theta, k, 6, 3), splits.clone(), splits)
        })
    ) {
        let whole = AlgebraEvent::from_cylinder(cyl);
        let mut a = whole.clone();
        let mut b = whole.clone();
        refined(&mut a, &s1, &vs);
        refined(&mut b, &s2, &vs);
        let ma = partition_measure(a.pieces(), &vs).unwrap();
        let mb = partition_measure(b.pieces(), &vs).unwrap();
        prop_assert_eq!(&ma, &mb);
        prop_assert_eq!(ma, whole.measure(&vs).unwrap());
        prop_assert!(a.same_set(&whole, &vs).unwrap());
    }

    #[test]
    fn refinement_identities(
        (vs, x, y) in value_space().prop_flat_map(|vs| {
            let k = vs.len();
            (Just(vs), cylinder(Side::Theta, k, 4, 3), cylinder(Side::Theta, k, 4, 3))
        })
    ) {
        let a = AlgebraEvent::from_cylinder(x);
        let b = AlgebraEvent::from_cylinder(y);
        let r = refine(&a, &b, &vs).unwrap();
        let m = |e: &AlgebraEvent| e.measure(&vs).unwrap();
        prop_assert_eq!(m(&a), m(&r.only_first) + m(&r.both));
        let union = r.union();
        prop_assert_eq!(m(&union), m(&r.only_first) + m(&r.both) + m(&r.only_second));
        // against the oracle on the joint support
        let support: Vec<u64> = a.support().union(&b.support()).map(|c| c.index).collect();
        prop_assert_eq!(m(&union), brute_measure(&union, &vs, &support));
        prop_assert_eq!(m(&r.both), brute_measure(&r.both, &vs, &support));
        // refinement adds no coordinates
        let joint: std::collections::BTreeSet<_> = a.support().union(&b.support()).copied().collect();
        for part in [&r.only_first, &r.both, &r.only_second] {
            prop_assert!(part.support().is_subset(&joint));
        }
        // the three parts are pairwise disjoint
        AlgebraEvent::new(Side::Theta, union.into_pieces()).unwrap();
    }

    #[test]
    fn complement_and_monotonicity(
        (vs, x, y) in value_space().prop_flat_map(|vs| {
            let k = vs.len();
            (Just(vs), cylinder(Side::Omega, k, 4, 3), cylinder(Side::Omega, k, 4, 3))
        })
    ) {
        let a = AlgebraEvent::from_cylinder(x);
        let c = a.complement(&vs).unwrap();
        prop_assert_eq!(c.measure(&vs).unwrap(), ratio(1, 1) - a.measure(&vs).unwrap());
        let b = AlgebraEvent::from_cylinder(y);
        let inter = a.intersection(&b).unwrap();
        prop_assert!(inter.is_subset(&a, &vs).unwrap());
        prop_assert!(inter.measure(&vs).unwrap() <= a.measure(&vs).unwrap());
        if a.is_subset(&b, &vs).unwrap() {
            prop_assert!(a.measure(&vs).unwrap() <= b.measure(&vs).unwrap());
        }
    }

    #[test]
    fn finite_additivity_of_disjoint_events(
        (vs, x, y) in value_space().prop_flat_map(|vs| {
            let k = vs.len();
            (Just(vs), cylinder(Side::Theta, k, 4, 3), cylinder(Side::Theta, k, 4, 3))
        })
    ) {
        let a = AlgebraEvent::from_cylinder(x);
        let b = AlgebraEvent::from_cylinder(y).difference(&a, &vs).unwrap();
        let u = a.union(&b, &vs).unwrap();
        prop_assert_eq!(u.measure(&vs).unwrap(), a.measure(&vs).unwrap() + b.measure(&vs).unwrap());
    }

    #[test]
    fn independence_on_disjoint_supports(
        (vs, x, y) in value_space().prop_flat_map(|vs| {
            let k = vs.len();
            (Just(vs), cylinder(Side::Theta, k, 4, 3), cylinder(Side::Theta, k, 4, 3))
        })
    ) {
        // shift y onto coordinates 10.. so the supports are disjoint
        let y = sdlimit_core::CylinderSpec::from_constraints(
            Side::Theta,
            y.constraints().map(|(i, s)| (i + 10, s)),
        ).unwrap();
        let both = x.intersect(&y).unwrap().unwrap();
        prop_assert_eq!(both.measure(&vs).unwrap(), x.measure(&vs).unwrap() * y.measure(&vs).unwrap());
    }
}
