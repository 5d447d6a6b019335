//! The density experiment: conjugates of one pseudo-generic diagonal map come
//! within `η` of random diagonal targets in `H(K)`.

use knaster_core::conjugacy::{approx_conjugator, pseudo_generic, refine_to_signature, signature, PseudoGenericSpec};
use knaster_core::gen::random_homeo;
use knaster_core::knaster::{diag_dist, DiagonalHomeo, PrimeSequence};
use knaster_core::{PlHomeo, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::campaign::{run_campaign, Outcome, Suite};
use crate::config::{ExperimentConfig, SuiteName};
use crate::report::CertificateReport;

/// Interior breakpoints of a random target.
const TARGET_BREAKPOINTS: usize = 3;

pub struct Density;

#[derive(Serialize, Deserialize)]
pub struct DensityInput {
    /// Target coordinate.
    pub m: usize,
    /// Working coordinate: both maps are compared after lifting here.
    pub working: usize,
    /// Seed of the pseudo-generic map at coordinate 0.
    pub generic_seed: u64,
    pub k: usize,
    /// Target inducer at coordinate `m`.
    pub y: PlHomeo,
    pub eta: Rational,
}

/// `Σ_{i=1}^{M} (p_i⋯p_M)/(p_1⋯p_i)`: how a sup error at coordinate `M`
/// spreads over the first `M` coordinates.
pub fn spread_constant(working: usize, primes: &PrimeSequence) -> Rational {
    (1..=working)
        .map(|i| Rational::from(primes.span(i, working)) / Rational::from(primes.span(1, i)))
        .sum()
}

/// Smallest coordinate `≥ m` whose tail bound is below `η/2`.
pub fn working_coordinate(m: usize, eta: &Rational, primes: &PrimeSequence) -> usize {
    primes.first_below(&(eta / Rational::from_int(2)), m.max(1))
}

impl Suite for Density {
    type Input = DensityInput;

    fn generate(&self, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, _: usize) -> DensityInput {
        let p = &cfg.params;
        let eta = p.eta_for(SuiteName::Density);
        DensityInput {
            m: p.m,
            working: working_coordinate(p.m, &eta, &cfg.primes),
            generic_seed: rng.gen(),
            k: p.k,
            y: random_homeo(rng, TARGET_BREAKPOINTS + 2),
            eta,
        }
    }

    fn group(&self, input: &DensityInput) -> String {
        format!("m={} M={}", input.m, input.working)
    }

    fn check(&self, cfg: &ExperimentConfig, input: &DensityInput) -> Outcome {
        let primes = &cfg.primes;
        let big_m = input.working;
        if primes.tail_bound(big_m) >= &input.eta / Rational::from_int(2) {
            return Err(format!("tail bound at M = {big_m} is not below η/2"));
        }
        let err = |e: knaster_core::Error| e.to_string();
        let f0 = pseudo_generic(&PseudoGenericSpec::alternating(input.k, input.generic_seed)).map_err(err)?;
        let f_top = DiagonalHomeo::new(0, f0).lift(big_m, primes).map_err(err)?;
        let y_top = DiagonalHomeo::new(input.m, input.y.clone()).lift(big_m, primes).map_err(err)?;
        let spread = spread_constant(big_m, primes);
        let eps = &input.eta / (Rational::from_int(4) * &spread);
        let half = &eps / Rational::from_int(2);
        let target = signature(&f_top.inducer);
        let refined = refine_to_signature(&y_top.inducer, &target, &half)
            .map_err(err)?
            .ok_or_else(|| format!("target signature {} does not embed in {target}", signature(&y_top.inducer)))?;
        let u = approx_conjugator(&f_top.inducer, &refined, &half).map_err(err)?;
        let conj = DiagonalHomeo::new(big_m, f_top.inducer.conjugate_by(&u));
        let d = diag_dist(&conj, &y_top, big_m, primes).map_err(err)?;
        if d.upper >= input.eta {
            return Err(format!("certified upper bound {} is not below η = {}", d.upper, input.eta));
        }
        Ok(json!({
            "M": big_m,
            "epsilon": eps,
            "components": target.len(),
            "conjugator_breakpoints": u.breakpoints().len(),
            "lower": d.lower,
            "upper": d.upper,
        }))
    }
}

/// Runs the density suite described by `cfg`.
pub fn run_density_experiment(cfg: &ExperimentConfig) -> anyhow::Result<CertificateReport> {
    let mut cfg = cfg.clone();
    cfg.suite = SuiteName::Density;
    run_campaign(&cfg)
}
