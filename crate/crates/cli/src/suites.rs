//! The verification suites behind `knaster-lab verify`.

use knaster_core::conjugacy::{signature, signature_oplus, signature_reflect};
use knaster_core::gen::{random_far, random_homeo, random_near, random_signature, random_with_signature, GRID};
use knaster_core::knaster::{
    certify_mod_bound, comod_lower_bound_check, separation_lower_bound, tent_witness_with, DiagonalHomeo,
};
use knaster_core::{oplus_power, tent_value, verify_semiconjugacy, PlHomeo, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::campaign::{Outcome, Suite};
use crate::config::{ExperimentConfig, SuiteName};

fn pick<T: Clone>(list: &[T], i: usize) -> T {
    list[i % list.len()].clone()
}

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `g ∘ T_d = T_d ∘ ⊕ᵈ(g)` as canonical forms.
pub struct Semiconj;

#[derive(Serialize, Deserialize)]
pub struct MapAndDegrees {
    pub g: PlHomeo,
    pub degrees: Vec<u64>,
}

impl Suite for Semiconj {
    type Input = MapAndDegrees;

    fn generate(&self, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, _: usize) -> MapAndDegrees {
        MapAndDegrees { g: random_homeo(rng, cfg.params.max_breakpoints), degrees: cfg.params.d_range() }
    }

    fn group(&self, input: &MapAndDegrees) -> String {
        format!("d={:?}", input.degrees)
    }

    fn check(&self, _: &ExperimentConfig, input: &MapAndDegrees) -> Outcome {
        for &d in &input.degrees {
            let rec = verify_semiconjugacy(&input.g, d).map_err(fail)?;
            if !rec.equal {
                let x = rec.counterexample.map(|x| x.to_string()).unwrap_or_default();
                return Err(format!("g ∘ T_{d} ≠ T_{d} ∘ ⊕^{d}(g), first differing at x = {x}"));
            }
        }
        Ok(json!({ "degrees": input.degrees }))
    }
}

/// `sup |⊕ᵈ(g₁) − ⊕ᵈ(g₂)| = sup |g₁ − g₂| / d` exactly.
pub struct OplusScaling;

#[derive(Serialize, Deserialize)]
pub struct PairAndDegrees {
    pub g1: PlHomeo,
    pub g2: PlHomeo,
    pub degrees: Vec<u64>,
}

impl Suite for OplusScaling {
    type Input = PairAndDegrees;

    fn generate(&self, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, _: usize) -> PairAndDegrees {
        let b = cfg.params.max_breakpoints;
        PairAndDegrees { g1: random_homeo(rng, b), g2: random_homeo(rng, b), degrees: cfg.params.d_range() }
    }

    fn group(&self, input: &PairAndDegrees) -> String {
        format!("d={:?}", input.degrees)
    }

    fn check(&self, _: &ExperimentConfig, input: &PairAndDegrees) -> Outcome {
        let base = input.g1.sup_dist(&input.g2).0;
        for &d in &input.degrees {
            let a = oplus_power(&input.g1, d).map_err(fail)?;
            let b = oplus_power(&input.g2, d).map_err(fail)?;
            let got = a.sup_dist(&b).0;
            let want = &base / Rational::from(d);
            if got != want {
                return Err(format!("d = {d}: sup distance {got}, expected {want}"));
            }
        }
        Ok(json!({ "distance": base, "degrees": input.degrees }))
    }
}

/// `⊕ᵈ(g)(i/d) = i/d` for every grid point.
pub struct GridFix;

impl Suite for GridFix {
    type Input = MapAndDegrees;

    fn generate(&self, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, _: usize) -> MapAndDegrees {
        MapAndDegrees { g: random_homeo(rng, cfg.params.max_breakpoints), degrees: cfg.params.d_range() }
    }

    fn group(&self, input: &MapAndDegrees) -> String {
        format!("d={:?}", input.degrees)
    }

    fn check(&self, _: &ExperimentConfig, input: &MapAndDegrees) -> Outcome {
        for &d in &input.degrees {
            let o = oplus_power(&input.g, d).map_err(fail)?;
            for i in 0..=d {
                let c = Rational::new(i as i64, d as i64);
                let v = o.eval(&c).map_err(fail)?;
                if v != c {
                    return Err(format!("⊕^{d}(g)({c}) = {v}"));
                }
            }
        }
        Ok(json!({ "degrees": input.degrees }))
    }
}

/// Signature naturality under reflection and `⊕ᵈ`, and invariance under
/// conjugation.
pub struct SignatureLaws;

#[derive(Serialize, Deserialize)]
pub struct SignatureInput {
    pub f: PlHomeo,
    pub u: PlHomeo,
    pub degrees: Vec<u64>,
}

impl Suite for SignatureLaws {
    type Input = SignatureInput;

    fn generate(&self, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, i: usize) -> SignatureInput {
        let b = cfg.params.max_breakpoints;
        let f = if i.is_multiple_of(2) {
            random_homeo(rng, b)
        } else {
            let s = random_signature(rng, 4);
            let fixed = rng.gen_bool(0.5);
            random_with_signature(rng, &s, fixed)
        };
        SignatureInput { f, u: random_homeo(rng, b), degrees: cfg.params.d_range() }
    }

    fn group(&self, input: &SignatureInput) -> String {
        format!("components={}", signature(&input.f).len())
    }

    fn check(&self, _: &ExperimentConfig, input: &SignatureInput) -> Outcome {
        let s = signature(&input.f);
        let r = signature(&input.f.reflect());
        if r != signature_reflect(&s) {
            return Err(format!("signature of the reflection is {r}, expected {}", signature_reflect(&s)));
        }
        for &d in &input.degrees {
            let o = signature(&oplus_power(&input.f, d).map_err(fail)?);
            if o != signature_oplus(&s, d) {
                return Err(format!("signature of ⊕^{d}(f) is {o}, expected {}", signature_oplus(&s, d)));
            }
        }
        let c = signature(&input.f.conjugate_by(&input.u));
        if c != s {
            return Err(format!("conjugate has signature {c}, f has {s}"));
        }
        Ok(json!({ "signature": s }))
    }
}

/// Diagonal maps induced by nearby homeomorphisms are near in `H(K)`.
pub struct ModBound;

#[derive(Serialize, Deserialize)]
pub struct ModBoundInput {
    pub g: PlHomeo,
    pub h: PlHomeo,
    pub n: usize,
    pub epsilon: Rational,
}

impl Suite for ModBound {
    type Input = ModBoundInput;

    fn generate(&self, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, i: usize) -> ModBoundInput {
        let p = &cfg.params;
        let n = 1 + i % p.n_max;
        let epsilon = pick(&p.epsilon, i / p.n_max);
        let g = random_homeo(rng, p.max_breakpoints);
        let radius = &epsilon * cfg.primes.weight(n);
        let h = random_near(rng, &g, &radius, p.max_breakpoints);
        ModBoundInput { g, h, n, epsilon }
    }

    fn group(&self, input: &ModBoundInput) -> String {
        format!("n={} eps={}", input.n, input.epsilon)
    }

    fn check(&self, cfg: &ExperimentConfig, input: &ModBoundInput) -> Outcome {
        let c = certify_mod_bound(&input.g, &input.h, input.n, &input.epsilon, &cfg.primes).map_err(fail)?;
        Ok(serde_json::to_value(c).expect("certificates serialize"))
    }
}

/// A point where `T_d` separates `f` and `g` by `δ` (or `δ/2` at an edge).
pub struct TentWitness;

#[derive(Serialize, Deserialize)]
pub struct TentInput {
    pub f: PlHomeo,
    pub g: PlHomeo,
    pub d: u64,
    pub delta: Rational,
}

impl Suite for TentWitness {
    type Input = TentInput;

    fn generate(&self, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, i: usize) -> TentInput {
        let p = &cfg.params;
        let delta = pick(&p.delta, i);
        let d = pick(&p.d, i / p.delta.len());
        let f = random_homeo(rng, p.max_breakpoints);
        let g = random_far(rng, &f, &(&delta / Rational::from(d)), p.max_breakpoints);
        TentInput { f, g, d, delta }
    }

    fn group(&self, input: &TentInput) -> String {
        format!("d={} delta={}", input.d, input.delta)
    }

    fn check(&self, cfg: &ExperimentConfig, input: &TentInput) -> Outcome {
        let TentInput { f, g, d, delta } = input;
        let w = tent_witness_with(f, g, *d, delta, cfg.params.strategy).map_err(fail)?;
        // recheck the inequality from scratch
        let tf = tent_value(*d, &f.eval(&w.x).map_err(fail)?);
        let tg = tent_value(*d, &g.eval(&w.x).map_err(fail)?);
        let gap = (&tf - &tg).abs();
        let edge = |v: &Rational| v.is_zero() || v.is_one();
        let holds = match w.case {
            1 => &gap >= delta,
            2 => gap >= delta / Rational::from_int(2) && (edge(&tf) || edge(&tg)),
            _ => false,
        };
        if !holds || gap != w.gap {
            return Err(format!("witness x = {} (case {}) does not satisfy its inequality: gap {gap}", w.x, w.case));
        }
        Ok(serde_json::to_value(w).expect("witnesses serialize"))
    }
}

/// `d(F, h) ≥ η/(p_1⋯p_m)` when the window of `h` moves `1/d` by `2η`.
pub struct Separation;

#[derive(Serialize, Deserialize)]
pub struct SeparationInput {
    pub f: DiagonalHomeo,
    pub h_window: PlHomeo,
    pub m: usize,
    pub eta: Rational,
}

/// A random homeomorphism through `(c, y)`: two rescaled random pieces.
fn homeo_through(rng: &mut ChaCha8Rng, c: &Rational, y: &Rational, max_breakpoints: usize) -> PlHomeo {
    let one = Rational::one();
    let left = random_homeo(rng, max_breakpoints / 2 + 1);
    let right = random_homeo(rng, max_breakpoints / 2 + 1);
    let mut pts = Vec::new();
    for (u, v) in left.breakpoints() {
        pts.push((c * u, y * v));
    }
    for (u, v) in right.breakpoints().iter().skip(1) {
        pts.push((c + (&one - c) * u, y + (&one - y) * v));
    }
    PlHomeo::new(pts).expect("both pieces increase")
}

impl Suite for Separation {
    type Input = SeparationInput;

    fn generate(&self, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, i: usize) -> SeparationInput {
        let p = &cfg.params;
        let eta = p.eta_for(SuiteName::Separation);
        let base = i % 2;
        let m = base + 1 + (i / 2) % 2;
        let d = cfg.primes.span(base + 1, m);
        let c = Rational::new(1, d as i64);
        let twice = &eta * Rational::from_int(2);
        let choices: Vec<Rational> = (1..GRID)
            .map(|k| Rational::new(k, GRID))
            .filter(|y| (y - &c).abs() >= twice)
            .collect();
        let y = if choices.is_empty() { c.clone() } else { choices[rng.gen_range(0..choices.len())].clone() };
        let f = DiagonalHomeo::new(base, random_homeo(rng, p.max_breakpoints));
        let h_window = homeo_through(rng, &c, &y, p.max_breakpoints);
        SeparationInput { f, h_window, m, eta }
    }

    fn group(&self, input: &SeparationInput) -> String {
        format!("n={} m={}", input.f.base, input.m)
    }

    fn check(&self, cfg: &ExperimentConfig, input: &SeparationInput) -> Outcome {
        let c = separation_lower_bound(&input.f, &input.h_window, input.m, &input.eta, &cfg.primes).map_err(fail)?;
        Ok(serde_json::to_value(c).expect("certificates serialize"))
    }
}

/// `d(p, q) ≥ δ/(p_1⋯p_j)` for `p′` at least `α_n` from the lift of `q`.
pub struct Comod;

#[derive(Serialize, Deserialize)]
pub struct ComodInput {
    pub p_prime: PlHomeo,
    pub n: usize,
    pub q: PlHomeo,
    pub j: usize,
    pub delta: Rational,
}

impl Suite for Comod {
    type Input = ComodInput;

    fn generate(&self, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, i: usize) -> ComodInput {
        let p = &cfg.params;
        let j = pick(&p.j, i);
        let n = j + (i / p.j.len()) % 2;
        let delta = pick(&p.delta, i / (2 * p.j.len()));
        let q = random_homeo(rng, p.max_breakpoints);
        let lifted = DiagonalHomeo::new(j, q.clone())
            .lift(n, &cfg.primes)
            .expect("n ≥ j")
            .inducer;
        let alpha = p.alpha.alpha(j, n, &delta, &cfg.primes);
        let p_prime = random_far(rng, &lifted, &alpha, p.max_breakpoints);
        ComodInput { p_prime, n, q, j, delta }
    }

    fn group(&self, input: &ComodInput) -> String {
        format!("j={} n={}", input.j, input.n)
    }

    fn check(&self, cfg: &ExperimentConfig, input: &ComodInput) -> Outcome {
        let c = comod_lower_bound_check(&input.p_prime, input.n, &input.q, input.j, &input.delta, &cfg.primes)
            .map_err(fail)?;
        Ok(serde_json::to_value(c).expect("certificates serialize"))
    }
}
