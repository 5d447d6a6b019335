mod common;

use common::{homeo, open_map};
use knaster_core::{block_sum, oplus_power, straighten, tent, verify_semiconjugacy, PlHomeo, Rational};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn semiconjugacy_identity(g in homeo(12), d in 1u64..=7) {
        let rec = verify_semiconjugacy(&g, d).unwrap();
        prop_assert!(rec.equal, "counterexample at {:?}", rec.counterexample);
    }

    #[test]
    fn oplus_contracts_distance_exactly(g1 in homeo(10), g2 in homeo(10), d in 1u64..=7) {
        let (a, b) = (oplus_power(&g1, d).unwrap(), oplus_power(&g2, d).unwrap());
        prop_assert_eq!(a.sup_dist(&b).0, g1.sup_dist(&g2).0 / Rational::from(d));
    }

    #[test]
    fn oplus_fixes_the_grid(g in homeo(12), d in 1u64..=7) {
        let o = oplus_power(&g, d).unwrap();
        for i in 0..=d {
            let c = Rational::new(i as i64, d as i64);
            prop_assert_eq!(o.eval(&c).unwrap(), c);
        }
    }

    #[test]
    fn oplus_powers_multiply(g in homeo(6), a in 1u64..=4, b in 1u64..=4) {
        let twice = oplus_power(&oplus_power(&g, b).unwrap(), a).unwrap();
        prop_assert_eq!(twice, oplus_power(&g, a * b).unwrap());
    }

    #[test]
    fn oplus_is_a_homomorphism(f in homeo(8), g in homeo(8), d in 1u64..=5) {
        let lhs = oplus_power(&f.compose(&g), d).unwrap();
        let rhs = oplus_power(&f, d).unwrap().compose(&oplus_power(&g, d).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn block_sum_norm_is_max_over_d(parts in proptest::collection::vec(homeo(8), 1..=6)) {
        let id = PlHomeo::identity();
        let d = parts.len() as u64;
        let max = parts.iter().map(|p| p.sup_dist(&id).0).max().unwrap();
        let s = block_sum(&parts).unwrap();
        prop_assert_eq!(s.sup_dist(&id).0, max / Rational::from(d));
    }

    #[test]
    fn straightening(d in 1usize..=8, seed in any::<u64>()) {
        let mut runner = proptest::test_runner::TestRunner::new_with_rng(
            ProptestConfig::default(),
            proptest::test_runner::TestRng::from_seed(
                proptest::test_runner::RngAlgorithm::ChaCha,
                &{
                    let mut s = [0u8; 32];
                    s[..8].copy_from_slice(&seed.to_le_bytes());
                    s
                },
            ),
        );
        let f = open_map(d).new_tree(&mut runner).unwrap().current();
        let g = open_map(d).new_tree(&mut runner).unwrap().current();
        let h = straighten(&f, &g).unwrap();
        prop_assert_eq!(g.compose_homeo(&h), f);
    }
}

#[test]
fn tents_compose_by_degree() {
    for a in 1..=6u64 {
        for b in 1..=6u64 {
            let ab = tent(a).unwrap().as_map().compose(tent(b).unwrap().as_map());
            assert_eq!(&ab, tent(a * b).unwrap().as_map(), "T_{a} ∘ T_{b}");
        }
    }
}
