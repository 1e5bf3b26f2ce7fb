#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use sdlimit_core::{AlgebraEvent, CylinderSpec, Label, Point, Rational, Side, ValueSet, ValueSpace};

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// Spaces of 2..=4 labels with small integer weights, at least two positive.
pub fn value_space() -> impl Strategy<Value = ValueSpace> {
    (2usize..=4)
        .prop_flat_map(|k| proptest::collection::vec(0i64..=4, k))
        .prop_filter("two positive weights", |w| w.iter().filter(|&&x| x > 0).count() >= 2)
        .prop_map(|w| {
            let total: i64 = w.iter().sum();
            ValueSpace::new(
                (0..w.len()).map(|i| format!("v{i}")).collect(),
                w.iter().map(|&x| ratio(x, total)).collect(),
            )
            .unwrap()
        })
}

pub fn nonempty_set(k: usize) -> impl Strategy<Value = ValueSet> {
    (1u64..(1 << k)).prop_map(ValueSet)
}

pub fn cylinder(side: Side, k: usize, coords: u64, max: usize) -> impl Strategy<Value = CylinderSpec> {
    proptest::collection::btree_map(0..coords, nonempty_set(k), 0..=max)
        .prop_map(move |m| CylinderSpec::from_constraints(side, m).unwrap())
}

/// Every point of `R^support`, with its product weight.
pub fn all_points(coords: &[u64], side: Side, space: &ValueSpace) -> Vec<(Point, Rational)> {
    let k = space.len();
    let total = k.pow(coords.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut p = Point::new();
            let mut w = ratio(1, 1);
            for &c in coords {
                let l = Label((code % k) as u8);
                code /= k;
                w *= space.weight(l);
                p = p.with(sdlimit_core::CoordinateId { side, index: c }, l);
            }
            (p, w)
        })
        .collect()
}

/// Measure of an event by summing product weights over every point of the
/// union of supports. Independent of the piece structure.
pub fn brute_measure(event: &AlgebraEvent, space: &ValueSpace, extra: &[u64]) -> Rational {
    let mut coords: BTreeSet<u64> = event.support().into_iter().map(|c| c.index).collect();
    coords.extend(extra);
    let coords: Vec<u64> = coords.into_iter().collect();
    all_points(&coords, event.side(), space)
        .into_iter()
        .filter(|(p, _)| event.contains(p).unwrap())
        .map(|(_, w)| w)
        .sum()
}

pub fn big(n: usize) -> BigInt {
    BigInt::from(n)
}
