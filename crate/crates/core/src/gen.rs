//! Seeded random generators for PL maps.
//!
//! Every generator takes an explicit RNG so campaigns can derive one stream
//! per trial from a campaign seed.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conjugacy::generic::bump;
use crate::conjugacy::signature::{FixedSignature, Sign};
use crate::error::Result;
use crate::map::{OpenPlMap, PlHomeo, PlMap};
use crate::pl::{PlFn, Point};
use crate::rational::Rational;

/// Grid used for random breakpoints.
pub const GRID: i64 = 96;

/// The RNG for trial `index` of a campaign seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `k` distinct sorted values `i/GRID` with `0 < i < GRID`.
fn grid_points(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    let mut idx: Vec<usize> = sample(rng, GRID as usize - 1, k).into_iter().map(|i| i + 1).collect();
    idx.sort_unstable();
    idx.into_iter().map(|i| Rational::new(i as i64, GRID)).collect()
}

/// A random PL homeomorphism with at most `max_breakpoints` breakpoints
/// (counting both endpoints), on the `1/96` grid.
pub fn random_homeo(rng: &mut ChaCha8Rng, max_breakpoints: usize) -> PlHomeo {
    let interior = rng.gen_range(0..=max_breakpoints.saturating_sub(2));
    let xs = grid_points(rng, interior);
    let ys = grid_points(rng, interior);
    let mut pts: Vec<Point> = vec![(Rational::zero(), Rational::zero())];
    pts.extend(xs.into_iter().zip(ys));
    pts.push((Rational::one(), Rational::one()));
    PlHomeo::new(pts).expect("sorted distinct grid points")
}

/// A random open map of degree `degree` with `f(0) = 0`: random lap
/// boundaries, each lap a rescaled random homeomorphism, alternating up/down.
pub fn random_open(rng: &mut ChaCha8Rng, degree: usize, lap_breakpoints: usize) -> OpenPlMap {
    let mut cuts = vec![Rational::zero()];
    cuts.extend(grid_points(rng, degree - 1));
    cuts.push(Rational::one());
    let mut pts: Vec<Point> = Vec::new();
    for j in 0..degree {
        let h = random_homeo(rng, lap_breakpoints);
        let (lo, hi) = (&cuts[j], &cuts[j + 1]);
        let w = hi - lo;
        for (x, y) in h.breakpoints() {
            let y = if j % 2 == 0 { y.clone() } else { Rational::one() - y };
            pts.push((lo + &w * x, y));
        }
    }
    let map = PlMap::from_fn(PlFn::from_pieces(pts)).expect("values in [0,1]");
    OpenPlMap::from_map(map).expect("laps alternate between 0 and 1")
}

/// A random homeomorphism whose signature is exactly `signs`: components
/// with random lengths, optionally separated by fixed intervals.
pub fn random_with_signature(rng: &mut ChaCha8Rng, signs: &FixedSignature, fixed_intervals: bool) -> PlHomeo {
    if signs.is_empty() {
        return PlHomeo::identity();
    }
    let k = signs.len();
    // alternate component and gap weights; gaps are zero-width unless requested
    let mut widths: Vec<u64> = Vec::with_capacity(2 * k + 1);
    for i in 0..=2 * k {
        let is_gap = i % 2 == 0;
        widths.push(if !is_gap {
            rng.gen_range(2..=8)
        } else if fixed_intervals && rng.gen_bool(0.5) {
            rng.gen_range(1..=3)
        } else {
            0
        });
    }
    let total = Rational::from(widths.iter().sum::<u64>());
    let mut cuts = vec![Rational::zero()];
    let mut acc = 0;
    for w in &widths {
        acc += w;
        cuts.push(Rational::from(acc) / &total);
    }
    let mut pts: Vec<Point> = vec![(Rational::zero(), Rational::zero())];
    for (c, sign) in signs.signs().iter().enumerate() {
        let (lo, hi) = (&cuts[2 * c + 1], &cuts[2 * c + 2]);
        pts.push((lo.clone(), lo.clone()));
        pts.extend(bump(rng, lo, hi, *sign));
        pts.push((hi.clone(), hi.clone()));
    }
    pts.push((Rational::one(), Rational::one()));
    PlHomeo::from_fn(PlFn::from_pieces(pts)).expect("bumps are increasing")
}

/// A random sign list of length `0..=max_len`.
pub fn random_signature(rng: &mut ChaCha8Rng, max_len: usize) -> FixedSignature {
    let len = rng.gen_range(0..=max_len);
    FixedSignature(
        (0..len)
            .map(|_| if rng.gen_bool(0.5) { Sign::Positive } else { Sign::Negative })
            .collect(),
    )
}

/// `g = f + t·(k − f)` with `t` chosen so that `sup |f − g| = target`
/// exactly (requires `target ≤ sup |f − k|`).
pub fn at_distance(f: &PlHomeo, k: &PlHomeo, target: &Rational) -> Result<PlHomeo> {
    let (s, _) = f.sup_dist(k);
    let t = target / s;
    PlHomeo::from_fn(f.as_fn().convex(k.as_fn(), &t)?)
}

/// A random homeomorphism at sup distance at least `min_dist` from `f`.
/// Half the time the distance is exactly `min_dist`.
pub fn random_far(rng: &mut ChaCha8Rng, f: &PlHomeo, min_dist: &Rational, max_breakpoints: usize) -> PlHomeo {
    loop {
        let k = random_homeo(rng, max_breakpoints);
        let (s, _) = f.sup_dist(&k);
        if &s < min_dist {
            continue;
        }
        if rng.gen_bool(0.5) {
            return at_distance(f, &k, min_dist).expect("convex combination of homeomorphisms");
        }
        return k;
    }
}

/// A random homeomorphism strictly within `radius` of `f`.
pub fn random_near(rng: &mut ChaCha8Rng, f: &PlHomeo, radius: &Rational, max_breakpoints: usize) -> PlHomeo {
    let k = random_homeo(rng, max_breakpoints);
    let (s, _) = f.sup_dist(&k);
    if s.is_zero() {
        return k;
    }
    // a fraction in [1/8, 7/8] of the way to the edge of the ball
    let frac = Rational::new(rng.gen_range(1..=7), 8);
    let target = (radius * frac).min(s);
    at_distance(f, &k, &target).expect("convex combination of homeomorphisms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::signature::signature;
    use crate::rational::q;

    #[test]
    fn homeos_respect_breakpoint_budget() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..100 {
            let h = random_homeo(&mut rng, 12);
            assert!(h.breakpoints().len() <= 12);
        }
    }

    #[test]
    fn open_maps_have_requested_degree() {
        let mut rng = trial_rng(2, 0);
        for d in 1..=8 {
            let f = random_open(&mut rng, d, 4);
            assert_eq!(f.degree(), d);
            assert!(f.value_at_zero().is_zero());
        }
    }

    #[test]
    fn signatures_are_realized() {
        let mut rng = trial_rng(3, 0);
        for _ in 0..50 {
            let s = random_signature(&mut rng, 4);
            let fixed = rng.gen_bool(0.5);
            let f = random_with_signature(&mut rng, &s, fixed);
            assert_eq!(signature(&f), s);
        }
    }

    #[test]
    fn distance_helpers() {
        let mut rng = trial_rng(4, 0);
        let f = random_homeo(&mut rng, 8);
        let g = random_far(&mut rng, &f, &q(1, 10), 8);
        assert!(f.sup_dist(&g).0 >= q(1, 10));
        let h = random_near(&mut rng, &f, &q(1, 20), 8);
        assert!(f.sup_dist(&h).0 < q(1, 20));
    }

    #[test]
    fn trial_streams_are_independent() {
        let a: u64 = trial_rng(9, 0).gen();
        let b: u64 = trial_rng(9, 1).gen();
        assert_ne!(a, b);
        assert_eq!(a, trial_rng(9, 0).gen::<u64>());
    }
}
