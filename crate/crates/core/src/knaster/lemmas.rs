//! Checkers for the quantitative estimates behind the comeager class.
//!
//! Each checker builds the witness the argument calls for and then verifies
//! the claimed inequality exactly. A failed check is returned as
//! [`Error::Counterexample`] with the data needed to replay it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::PlHomeo;
use crate::pl::PlFn;
use crate::rational::Rational;
use crate::tent::{tent, tent_value};

use super::diagonal::{diag_dist, DiagonalHomeo};
use super::point::{extend_point, partial_sum, CertifiedDistance, TruncatedKnasterPoint};
use super::primes::PrimeSequence;

/// Truncations tried beyond the first admissible one before giving up.
pub const MOD_BOUND_EXTRA: usize = 6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModBoundCertificate {
    pub n: usize,
    pub epsilon: Rational,
    pub distance: CertifiedDistance,
    pub certified: bool,
}

/// For `sup |g − h| < ε/(p_1⋯p_n)`, certifies that the diagonal maps induced
/// at coordinate `n` are within `ε` in the sup metric on `K`.
///
/// Through any truncation the gap is below `ε(1/2 + Σ w(i)²) ≤ 5ε/6`, so the
/// first `N` with tail `w(N) < ε/6` must certify. Cheaper truncations are
/// tried first, from the first `N` whose tail alone is below `ε`.
pub fn certify_mod_bound(
    g: &PlHomeo,
    h: &PlHomeo,
    n: usize,
    eps: &Rational,
    primes: &PrimeSequence,
) -> Result<ModBoundCertificate> {
    let radius = eps * primes.weight(n);
    let (s, _) = g.sup_dist(h);
    if s >= radius {
        return Err(Error::Precondition(format!(
            "sup distance {s} is not below ε/(p_1⋯p_n) = {radius}"
        )));
    }
    let start = primes.first_below(eps, n);
    let proof_n = primes.first_below(&(eps / Rational::from_int(6)), n);
    let (fg, fh) = (DiagonalHomeo::new(n, g.clone()), DiagonalHomeo::new(n, h.clone()));
    let mut last = None;
    for big_n in start..=proof_n + MOD_BOUND_EXTRA {
        let distance = diag_dist(&fg, &fh, big_n, primes)?;
        if &distance.upper < eps {
            return Ok(ModBoundCertificate {
                n,
                epsilon: eps.clone(),
                distance,
                certified: true,
            });
        }
        last = Some(distance);
    }
    let d = last.expect("at least one truncation");
    Err(Error::Counterexample(format!(
        "no truncation up to {} certifies ε = {eps}: upper bound {} (lower {})",
        d.n, d.upper, d.lower
    )))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessStrategy {
    /// Exact maximum first, then every grid preimage.
    #[default]
    Exhaustive,
    /// Follow the chain `k_1 < k_2 < …` of grid values step by step.
    ProofTrace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TentWitness {
    pub x: Rational,
    /// `1`: `|T_d f(x) − T_d g(x)| ≥ δ`; `2`: `≥ δ/2` with one side in `{0,1}`.
    pub case: u8,
    pub tf: Rational,
    pub tg: Rational,
    pub gap: Rational,
    pub strategy: WitnessStrategy,
    /// Grid indices visited by the proof trace.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<u64>,
    /// Set when the chain stalled and the exhaustive search supplied `x`.
    #[serde(default)]
    pub fallback: bool,
}

fn witness_at(
    f: &PlHomeo,
    g: &PlHomeo,
    d: u64,
    x: Rational,
    strategy: WitnessStrategy,
) -> TentWitness {
    let tf = tent_value(d, &f.eval(&x).expect("inside [0,1]"));
    let tg = tent_value(d, &g.eval(&x).expect("inside [0,1]"));
    let gap = (&tf - &tg).abs();
    TentWitness { x, case: 0, tf, tg, gap, strategy, trace: Vec::new(), fallback: false }
}

/// Checks the witness inequality exactly and fills in its case.
fn certify(mut w: TentWitness, delta: &Rational) -> Option<TentWitness> {
    let half = delta / Rational::from_int(2);
    let on_edge = |v: &Rational| v.is_zero() || v.is_one();
    if &w.gap >= delta {
        w.case = 1;
        Some(w)
    } else if w.gap >= half && (on_edge(&w.tf) || on_edge(&w.tg)) {
        w.case = 2;
        Some(w)
    } else {
        None
    }
}

pub fn tent_witness(f: &PlHomeo, g: &PlHomeo, d: u64, delta: &Rational) -> Result<TentWitness> {
    tent_witness_with(f, g, d, delta, WitnessStrategy::Exhaustive)
}

/// For `δ < 1/4` and `sup |f − g| ≥ δ/d`, finds `x` with either
/// `|T_d f(x) − T_d g(x)| ≥ δ`, or `≥ δ/2` with `T_d f(x)` or `T_d g(x)` in `{0,1}`.
pub fn tent_witness_with(
    f: &PlHomeo,
    g: &PlHomeo,
    d: u64,
    delta: &Rational,
    strategy: WitnessStrategy,
) -> Result<TentWitness> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    if !delta.is_positive() || delta >= &Rational::new(1, 4) {
        return Err(Error::Precondition(format!("δ = {delta} must lie in (0, 1/4)")));
    }
    let (s, _) = f.sup_dist(g);
    let need = delta / Rational::from(d);
    if s < need {
        return Err(Error::Precondition(format!("sup distance {s} is below δ/d = {need}")));
    }
    let found = match strategy {
        WitnessStrategy::Exhaustive => exhaustive(f, g, d, delta)?,
        WitnessStrategy::ProofTrace => proof_trace(f, g, d, delta)?,
    };
    found.ok_or_else(|| {
        Error::Counterexample(format!(
            "no tent witness for d = {d}, δ = {delta}, f = {f:?}, g = {g:?}"
        ))
    })
}

fn exhaustive(f: &PlHomeo, g: &PlHomeo, d: u64, delta: &Rational) -> Result<Option<TentWitness>> {
    let strategy = WitnessStrategy::Exhaustive;
    let t = tent(d)?;
    let tf = f.as_fn().then(t.as_map().as_fn())?;
    let tg = g.as_fn().then(t.as_map().as_fn())?;
    let (m, x) = tf.sub(&tg)?.abs().argmax();
    if &m >= delta {
        return Ok(certify(witness_at(f, g, d, x, strategy), delta));
    }
    let (fi, gi) = (f.invert(), g.invert());
    let mut best: Option<TentWitness> = None;
    for k in 0..=d {
        let y = Rational::new(k as i64, d as i64);
        for inv in [&fi, &gi] {
            let x = inv.eval(&y)?;
            if let Some(w) = certify(witness_at(f, g, d, x, strategy), delta) {
                if best.as_ref().is_none_or(|b| w.gap > b.gap) {
                    best = Some(w);
                }
            }
        }
    }
    Ok(best)
}

/// Starting from a point where `|f − g| ≥ δ/d`: if both values share a grid
/// cell the point already works. Otherwise, with `f(x) < g(x)` say, pick the
/// grid value `j/d` between them on the side with margin `δ/2d` and move to
/// `f⁻¹(j/d)` (or `g⁻¹(j/d)` when the margin is on the other side). If that
/// point fails, the other map lands within `δ/2d` of a grid value `k/d` of the
/// same parity; step to the neighbouring grid value and repeat. The indices
/// move strictly in one direction, so the chain ends after at most `d` steps.
fn proof_trace(f: &PlHomeo, g: &PlHomeo, d: u64, delta: &Rational) -> Result<Option<TentWitness>> {
    let strategy = WitnessStrategy::ProofTrace;
    let dd = Rational::from(d);
    let (_, x) = f.sup_dist(g);
    let start = witness_at(f, g, d, x.clone(), strategy);
    let (fx, gx) = (f.eval(&x)?, g.eval(&x)?);
    let cell = |v: &Rational| (&dd * v).floor_i64().expect("small grid").min(d as i64 - 1);
    if cell(&fx) == cell(&gx) {
        return Ok(certify(start, delta));
    }
    // orient so that a(x) < b(x)
    let (a, b, ax, bx) = if fx < gx { (f, g, fx, gx) } else { (g, f, gx, fx) };
    let half_cell = delta / (Rational::from_int(2) * &dd);
    // largest grid value at most b(x); it lies above a(x), and one of the
    // two margins is at least δ/2d
    let j = (&dd * &bx).floor_i64().expect("small grid");
    debug_assert!(Rational::new(j, d as i64) > ax);
    let (anchor, other, mut k, dir): (&PlHomeo, &PlHomeo, i64, i64) =
        if &bx - Rational::new(j, d as i64) >= half_cell {
            // margin above the grid: anchor on a, chain climbs
            (a, b, j, 1)
        } else {
            // margin below the grid: anchor on b, chain descends
            (b, a, j, -1)
        };
    let anchor_inv = anchor.invert();
    let mut trace = Vec::new();
    for _ in 0..=d + 1 {
        trace.push(k as u64);
        let y = anchor_inv.eval(&Rational::new(k, d as i64))?;
        let mut w = witness_at(f, g, d, y.clone(), strategy);
        w.trace = trace.clone();
        if let Some(w) = certify(w, delta) {
            return Ok(Some(w));
        }
        let v = &dd * other.eval(&y)?;
        let k1 = v.floor_i64().expect("small grid");
        // nearest grid index to the other map's value
        let near = if &v - Rational::from_int(k1) <= Rational::new(1, 2) { k1 } else { k1 + 1 };
        let next = near - dir;
        if (next - k) * dir <= 0 || next < 0 || next > d as i64 {
            break;
        }
        k = next;
    }
    // fall back to the exhaustive search, keeping the trace for diagnosis
    Ok(exhaustive(f, g, d, delta)?.map(|mut w| {
        w.strategy = strategy;
        w.trace = trace;
        w.fallback = true;
        w
    }))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparationCertificate {
    /// Point with `x_m = 1/d`.
    pub witness: TruncatedKnasterPoint,
    /// Truncated gap at the witness.
    pub value: Rational,
    /// `η/(p_1⋯p_m)`
    pub bound: Rational,
    pub certified: bool,
}

/// For `F` induced at `n` and `h` at `m > n` with `|h(1/d) − 1/d| ≥ 2η`,
/// `d = p_{n+1}⋯p_m`, certifies `d(F, h) ≥ η/(p_1⋯p_m)` at the point with
/// `x_m = 1/d`, using that the lift of `F` to `m` fixes `1/d`.
pub fn separation_lower_bound(
    f: &DiagonalHomeo,
    h_window: &PlHomeo,
    m: usize,
    eta: &Rational,
    primes: &PrimeSequence,
) -> Result<SeparationCertificate> {
    if m <= f.base {
        return Err(Error::Precondition(format!(
            "window coordinate {m} must exceed the base coordinate {}",
            f.base
        )));
    }
    let d = primes.span(f.base + 1, m);
    let c = Rational::new(1, d as i64);
    let moved = (h_window.eval(&c)? - &c).abs();
    if moved < eta * Rational::from_int(2) {
        return Err(Error::Precondition(format!(
            "|h(1/{d}) − 1/{d}| = {moved} is below 2η = {}",
            eta * Rational::from_int(2)
        )));
    }
    let witness = extend_point(&c, m, primes)?;
    let lifted = f.lift(m, primes)?;
    let a = extend_point(&lifted.inducer.eval(&c)?, m, primes)?;
    let b = extend_point(&h_window.eval(&c)?, m, primes)?;
    let value = partial_sum(&a, &b, primes);
    let bound = eta * primes.weight(m);
    let certified = value >= bound;
    if !certified {
        return Err(Error::Counterexample(format!(
            "separation gap {value} below {bound} at x_{m} = {c}"
        )));
    }
    Ok(SeparationCertificate { witness, value, bound, certified })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComodCertificate {
    pub n: usize,
    pub j: usize,
    /// `0` for `n = j`, else the tent-witness case used.
    pub case: u8,
    /// Coordinate whose term alone meets the bound.
    pub coordinate: usize,
    pub witness: TruncatedKnasterPoint,
    /// `c_coordinate · |p(x) − q(x)|` at that coordinate.
    pub contribution: Rational,
    /// Full truncated gap at the witness.
    pub value: Rational,
    /// `δ/(p_1⋯p_j)`
    pub bound: Rational,
    pub certified: bool,
}

/// For `p′` at coordinate `n ≥ j` and `q` at `j` with `sup |p′ − lift(q)| ≥
/// δ/(p_{j+1}⋯p_n)`, certifies `d(p, q) ≥ δ/(p_1⋯p_j)`. For `n = j` the
/// sup-distance witness works at coordinate `j`; for `n > j` a tent witness
/// with `d = p_{j+1}⋯p_n` works at coordinate `j` (case 1) or, after the
/// extra factor `p_j`, at coordinate `j − 1` (case 2).
pub fn comod_lower_bound_check(
    p_prime: &PlHomeo,
    n: usize,
    q: &PlHomeo,
    j: usize,
    delta: &Rational,
    primes: &PrimeSequence,
) -> Result<ComodCertificate> {
    if j < 2 || n < j {
        return Err(Error::Precondition(format!("need 2 ≤ j ≤ n, got j = {j}, n = {n}")));
    }
    let pj = Rational::from(primes.prime(j));
    if !delta.is_positive() || delta >= &Rational::new(1, 4) || delta >= &pj.recip() {
        return Err(Error::Precondition(format!(
            "δ = {delta} must be below min(1/4, 1/p_j = 1/{pj})"
        )));
    }
    let d = primes.span(j + 1, n);
    let lifted = DiagonalHomeo::new(j, q.clone()).lift(n, primes)?.inducer;
    let (s, at) = p_prime.sup_dist(&lifted);
    let need = delta / Rational::from(d);
    if s < need {
        return Err(Error::Precondition(format!(
            "sup distance {s} is below δ/(p_(j+1)⋯p_n) = {need}"
        )));
    }
    let (x_top, case) = if n == j {
        (at, 0)
    } else {
        let w = tent_witness(p_prime, &lifted, d, delta)?;
        (w.x, w.case)
    };
    let witness = extend_point(&x_top, n, primes)?;
    let a = extend_point(&p_prime.eval(&x_top)?, n, primes)?;
    let b = extend_point(&lifted.eval(&x_top)?, n, primes)?;
    let term = |i: usize| primes.coeff(i) * (a.coord(i) - b.coord(i)).abs();
    let bound = delta * primes.weight(j);
    let coordinate = if term(j) >= bound { j } else { j - 1 };
    let contribution = term(coordinate);
    let value = partial_sum(&a, &b, primes);
    let certified = contribution >= bound && value >= bound;
    if !certified {
        return Err(Error::Counterexample(format!(
            "comod gap {value} below {bound} (n = {n}, j = {j}, case {case}, x_n = {x_top})"
        )));
    }
    Ok(ComodCertificate {
        n,
        j,
        case,
        coordinate,
        witness,
        contribution,
        value,
        bound,
        certified,
    })
}

/// `t ↦ |T_d f(t) − T_d g(t)|`, for diagnostics.
pub fn tent_gap(f: &PlHomeo, g: &PlHomeo, d: u64) -> Result<PlFn> {
    let t = tent(d)?;
    let tf = f.as_fn().then(t.as_map().as_fn())?;
    let tg = g.as_fn().then(t.as_map().as_fn())?;
    Ok(tf.sub(&tg)?.abs())
}
