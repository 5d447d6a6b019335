mod common;

use common::{homeo, signature};
use knaster_core::conjugacy::{
    approx_conjugator_certified, decide_conjugate, grid_block_conjugate_certified, pseudo_generic,
    refine_to_signature, signature as sig_of, signature_oplus, signature_reflect, PseudoGenericSpec,
};
use knaster_core::gen::{random_with_signature, trial_rng};
use knaster_core::{block_sum, oplus_power, q};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn reflection_square(f in homeo(12)) {
        prop_assert_eq!(sig_of(&f.reflect()), signature_reflect(&sig_of(&f)));
    }

    #[test]
    fn oplus_square(f in homeo(10), d in 1u64..=6) {
        prop_assert_eq!(sig_of(&oplus_power(&f, d).unwrap()), signature_oplus(&sig_of(&f), d));
    }

    #[test]
    fn conjugation_invariance(f in homeo(10), u in homeo(10)) {
        prop_assert_eq!(sig_of(&f.conjugate_by(&u)), sig_of(&f));
    }

    #[test]
    fn reflect_of_signature_is_involution(s in signature(6)) {
        prop_assert_eq!(signature_reflect(&signature_reflect(&s)), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn synthesized_conjugators_meet_tolerance(s in signature(4), seed in any::<u64>(), gaps in any::<(bool, bool)>()) {
        let mut rng = trial_rng(seed, 0);
        let f = random_with_signature(&mut rng, &s, gaps.0);
        let g = random_with_signature(&mut rng, &s, gaps.1);
        prop_assert!(decide_conjugate(&f, &g));
        let eta = q(1, 100);
        let c = approx_conjugator_certified(&f, &g, &eta).unwrap();
        prop_assert!(c.distance < eta);
        prop_assert_eq!(f.conjugate_by(&c.conjugator).sup_dist(&g).0, c.distance);
    }

    #[test]
    fn block_conjugation(k in 1usize..=3, d in 2u64..=4, seed in any::<u64>()) {
        let f = pseudo_generic(&PseudoGenericSpec::alternating(k, seed)).unwrap();
        let mut rng = trial_rng(seed, 1);
        let sf = sig_of(&f);
        let parts: Vec<_> = (0..d)
            .map(|i| {
                let s = if i % 2 == 0 { sf.clone() } else { signature_reflect(&sf) };
                random_with_signature(&mut rng, &s, false)
            })
            .collect();
        let h = block_sum(&parts).unwrap();
        let eta = q(1, 100);
        let b = grid_block_conjugate_certified(&f, d, &h, &eta).unwrap();
        prop_assert!(b.distance < eta);
        prop_assert_eq!(b.norm, b.max_part_norm / knaster_core::Rational::from(d));
    }

    #[test]
    fn refinement_reaches_any_supersequence(f in homeo(8), extra in signature(3), seed in any::<u64>()) {
        // interleave extra signs around the existing signature
        let own = sig_of(&f);
        let mut target = own.0.clone();
        for (i, s) in extra.0.iter().enumerate() {
            let at = (seed as usize).wrapping_add(i * 7) % (target.len() + 1);
            target.insert(at, *s);
        }
        let target = knaster_core::conjugacy::FixedSignature(target);
        let tol = q(1, 64);
        let g = refine_to_signature(&f, &target, &tol).unwrap().unwrap();
        prop_assert_eq!(sig_of(&g), target);
        prop_assert!(g.sup_dist(&f).0 < tol);
    }
}
