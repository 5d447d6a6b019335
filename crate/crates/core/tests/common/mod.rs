#![allow(dead_code)]

use std::collections::BTreeSet;

use knaster_core::conjugacy::{FixedSignature, Sign};
use knaster_core::{OpenPlMap, PlHomeo, Rational};
use proptest::collection::btree_set;
use proptest::prelude::*;

pub const GRID: i64 = 96;

fn homeo_from(xs: BTreeSet<i64>, ys: BTreeSet<i64>) -> PlHomeo {
    let mut pts = vec![(Rational::zero(), Rational::zero())];
    pts.extend(
        xs.into_iter()
            .zip(ys)
            .map(|(x, y)| (Rational::new(x, GRID), Rational::new(y, GRID))),
    );
    pts.push((Rational::one(), Rational::one()));
    PlHomeo::new(pts).unwrap()
}

/// PL homeomorphisms with at most `max_breakpoints` breakpoints on the 1/96 grid.
pub fn homeo(max_breakpoints: usize) -> impl Strategy<Value = PlHomeo> {
    (0..=max_breakpoints - 2)
        .prop_flat_map(|k| (btree_set(1..GRID, k), btree_set(1..GRID, k)))
        .prop_map(|(xs, ys)| homeo_from(xs, ys))
}

pub fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Positive), Just(Sign::Negative)]
}

pub fn signature(max_len: usize) -> impl Strategy<Value = FixedSignature> {
    proptest::collection::vec(sign(), 0..=max_len).prop_map(FixedSignature)
}

/// Open maps of the given degree with value 0 at 0, built lap by lap.
pub fn open_map(degree: usize) -> impl Strategy<Value = OpenPlMap> {
    (
        btree_set(1..GRID, degree - 1),
        proptest::collection::vec(homeo(4), degree),
    )
        .prop_map(move |(cuts, laps)| {
            let mut c = vec![Rational::zero()];
            c.extend(cuts.into_iter().map(|x| Rational::new(x, GRID)));
            c.push(Rational::one());
            let mut pts = Vec::new();
            for (j, h) in laps.iter().enumerate() {
                let w = &c[j + 1] - &c[j];
                for (x, y) in h.breakpoints().iter().skip(if j == 0 { 0 } else { 1 }) {
                    let y = if j % 2 == 0 { y.clone() } else { Rational::one() - y };
                    pts.push((&c[j] + &w * x, y));
                }
            }
            OpenPlMap::new(pts).unwrap()
        })
}

/// Rationals `k/den` in `[0,1]`.
pub fn unit(den: i64) -> impl Strategy<Value = Rational> {
    (0..=den).prop_map(move |k| Rational::new(k, den))
}
