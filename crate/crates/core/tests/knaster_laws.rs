mod common;

use common::{homeo, open_map, unit};
use knaster_core::knaster::{
    certify_mod_bound, degree_diagonal, diag_dist, eval_diagonal, extend_point, tent_witness_with,
    DiagonalHomeo, GeneralDiagonalMap, PrimeSequence, WitnessStrategy,
};
use knaster_core::gen::{random_far, random_homeo, random_near, trial_rng};
use knaster_core::{q, Rational};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn primes() -> impl Strategy<Value = PrimeSequence> {
    prop_oneof![Just(PrimeSequence::All2), Just(PrimeSequence::Diagonal), Just(PrimeSequence::Explicit(vec![3, 2]))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_output_is_coherent(f in homeo(8), base in 0usize..=2, x in unit(97), p in primes()) {
        let point = extend_point(&x, 3, &p).unwrap();
        let y = eval_diagonal(&DiagonalHomeo::new(base, f), &point, &p).unwrap();
        prop_assert!(y.is_coherent(&p));
    }

    #[test]
    fn eval_is_lift_equivariant(f in homeo(8), m in 0usize..=3, x in unit(101), p in primes()) {
        let big = DiagonalHomeo::new(0, f);
        let lifted = big.lift(m, &p).unwrap();
        let point = extend_point(&x, 3, &p).unwrap();
        prop_assert_eq!(eval_diagonal(&lifted, &point, &p).unwrap(), eval_diagonal(&big, &point, &p).unwrap());
    }

    #[test]
    fn coordinate_zero_action(f in homeo(8), x in unit(60)) {
        let p = PrimeSequence::Diagonal;
        let point = extend_point(&x, 0, &p).unwrap();
        let y = eval_diagonal(&DiagonalHomeo::new(0, f.clone()), &point, &p).unwrap();
        prop_assert_eq!(y.coords(), &[f.eval(&x).unwrap()]);
    }

    #[test]
    fn diag_dist_bounds_survive_prelifting(f in homeo(6), g in homeo(6), p in primes()) {
        let (a, b) = (DiagonalHomeo::new(0, f), DiagonalHomeo::new(0, g));
        let plain = diag_dist(&a, &b, 2, &p).unwrap();
        let pre = diag_dist(&a.lift(1, &p).unwrap(), &b.lift(2, &p).unwrap(), 2, &p).unwrap();
        prop_assert_eq!(&plain, &pre);
        let finer = diag_dist(&a, &b, 3, &p).unwrap();
        prop_assert!(finer.lower >= plain.lower);
        prop_assert!(finer.lower <= plain.upper);
        prop_assert!(finer.upper - &finer.lower <= p.tail_bound(3));
    }

    #[test]
    fn degree_is_multiplicative(a in 1usize..=4, b in 1usize..=4, seed in any::<u64>()) {
        let p = PrimeSequence::All2;
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        let _ = seed;
        let wf = open_map(a).new_tree(&mut runner).unwrap().current();
        let wg = open_map(b).new_tree(&mut runner).unwrap().current();
        let f = GeneralDiagonalMap::new(0, 1, wf).unwrap();
        let g = GeneralDiagonalMap::new(1, 2, wg).unwrap();
        let fg = f.compose(&g, &p).unwrap();
        prop_assert_eq!(degree_diagonal(&fg, &p), degree_diagonal(&f, &p) * degree_diagonal(&g, &p));
    }
}

#[test]
fn mod_bound_holds_on_seeded_instances() {
    for (i, p) in [PrimeSequence::All2, PrimeSequence::Diagonal].iter().enumerate() {
        for trial in 0..10u64 {
            let mut rng = trial_rng(11 + i as u64, trial);
            let n = (trial % 3) as usize + 1;
            let eps = if trial % 2 == 0 { q(1, 10) } else { q(1, 50) };
            let g = random_homeo(&mut rng, 10);
            let h = random_near(&mut rng, &g, &(&eps * p.weight(n)), 10);
            let c = certify_mod_bound(&g, &h, n, &eps, p).unwrap();
            assert!(c.distance.upper < eps);
        }
    }
}

#[test]
fn both_witness_strategies_succeed() {
    for trial in 0..60u64 {
        let mut rng = trial_rng(5, trial);
        let d = [2u64, 3, 4, 6][(trial % 4) as usize];
        let delta = if trial % 2 == 0 { q(1, 5) } else { q(1, 8) };
        let f = random_homeo(&mut rng, 10);
        let g = random_far(&mut rng, &f, &(&delta / Rational::from(d)), 10);
        for s in [WitnessStrategy::Exhaustive, WitnessStrategy::ProofTrace] {
            let w = tent_witness_with(&f, &g, d, &delta, s).unwrap();
            assert!(w.case == 1 || w.case == 2);
            assert!(w.gap >= &delta / Rational::from_int(2));
        }
    }
}
