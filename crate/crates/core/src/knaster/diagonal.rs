//! Diagonal homeomorphisms of the Knaster continuum.
//!
//! `(n, φ)` is the degree-one homeomorphism with `π_n ∘ F = φ ∘ π_n`. Because
//! `φ ∘ T_p = T_p ∘ ⊕ᵖ(φ)`, the same map is induced at `n + 1` by `⊕^{p_{n+1}}(φ)`,
//! and lifting to a common coordinate decides equality.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{OpenPlMap, PlHomeo};
use crate::pl::PlFn;
use crate::rational::Rational;
use crate::tent::{oplus_power, tent};

use super::point::{extend_point, CertifiedDistance, TruncatedKnasterPoint};
use super::primes::PrimeSequence;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalHomeo {
    pub base: usize,
    pub inducer: PlHomeo,
}

impl DiagonalHomeo {
    pub fn new(base: usize, inducer: PlHomeo) -> Self {
        DiagonalHomeo { base, inducer }
    }

    pub fn identity() -> Self {
        DiagonalHomeo::new(0, PlHomeo::identity())
    }

    /// The same homeomorphism induced at coordinate `m ≥ base`.
    pub fn lift(&self, m: usize, primes: &PrimeSequence) -> Result<DiagonalHomeo> {
        if m < self.base {
            return Err(Error::Precondition(format!(
                "cannot lift from coordinate {} down to {m}",
                self.base
            )));
        }
        let d = primes.span(self.base + 1, m);
        Ok(DiagonalHomeo::new(m, oplus_power(&self.inducer, d)?))
    }

    /// Equality as homeomorphisms of `K`.
    pub fn same_as(&self, other: &DiagonalHomeo, primes: &PrimeSequence) -> Result<bool> {
        let m = self.base.max(other.base);
        Ok(self.lift(m, primes)? == other.lift(m, primes)?)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DiagonalHomeo, primes: &PrimeSequence) -> Result<DiagonalHomeo> {
        let m = self.base.max(other.base);
        let (a, b) = (self.lift(m, primes)?, other.lift(m, primes)?);
        Ok(DiagonalHomeo::new(m, a.inducer.compose(&b.inducer)))
    }

    pub fn invert(&self) -> DiagonalHomeo {
        DiagonalHomeo::new(self.base, self.inducer.invert())
    }

    /// `u⁻¹ ∘ self ∘ u`.
    pub fn conjugate_by(&self, u: &DiagonalHomeo, primes: &PrimeSequence) -> Result<DiagonalHomeo> {
        u.invert().compose(&self.compose(u, primes)?, primes)
    }
}

/// Image of a truncated point: lift to the top coordinate, apply the
/// inducer there, and recompute the lower coordinates by tents.
pub fn eval_diagonal(
    f: &DiagonalHomeo,
    x: &TruncatedKnasterPoint,
    primes: &PrimeSequence,
) -> Result<TruncatedKnasterPoint> {
    let top = x.top();
    if top < f.base {
        return Err(Error::TruncationTooShort { need: f.base, have: top });
    }
    let lifted = f.lift(top, primes)?;
    extend_point(&lifted.inducer.eval(x.coord(top))?, top, primes)
}

/// Coordinates `0..=N` of `φ(t)` extended downward, as PL functions of `t`.
fn coordinate_fns(phi: &PlHomeo, n: usize, primes: &PrimeSequence) -> Result<Vec<PlFn>> {
    let mut out = vec![phi.as_fn().clone()];
    for m in (1..=n).rev() {
        let t = tent(primes.prime(m))?;
        let next = out.last().unwrap().then(t.as_map().as_fn())?;
        out.push(next);
    }
    out.reverse();
    Ok(out)
}

/// `t ↦ Σ_{i≤N} c_i |F(x)_i − G(x)_i|` where `x` is the point with `x_N = t`.
pub fn truncated_gap(
    f: &DiagonalHomeo,
    g: &DiagonalHomeo,
    n: usize,
    primes: &PrimeSequence,
) -> Result<PlFn> {
    if n < f.base || n < g.base {
        return Err(Error::Precondition(format!(
            "truncation {n} below a base coordinate ({} or {})",
            f.base, g.base
        )));
    }
    let cf = coordinate_fns(&f.lift(n, primes)?.inducer, n, primes)?;
    let cg = coordinate_fns(&g.lift(n, primes)?.inducer, n, primes)?;
    let mut total = PlFn::constant(Rational::zero(), Rational::one(), Rational::zero());
    for (i, (a, b)) in cf.iter().zip(&cg).enumerate() {
        total = total.add(&a.sub(b)?.abs().scale(&primes.coeff(i)))?;
    }
    Ok(total)
}

/// Certified bounds on `sup_{x∈K} d_K(F(x), G(x))` from truncation `N`. The
/// truncated gap is PL in `x_N`, so its supremum is exact; the tail adds at
/// most `Σ_{i>N} w(i)`.
pub fn diag_dist(
    f: &DiagonalHomeo,
    g: &DiagonalHomeo,
    n: usize,
    primes: &PrimeSequence,
) -> Result<CertifiedDistance> {
    let gap = truncated_gap(f, g, n, primes)?;
    let (lower, t) = gap.argmax();
    Ok(CertifiedDistance {
        upper: &lower + primes.tail_bound(n),
        lower,
        n,
        witness: extend_point(&t, n, primes)?,
    })
}

/// An open map `w: I_source → I_target` with `π_target ∘ F = w ∘ π_source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralDiagonalMap {
    pub target: usize,
    pub source: usize,
    pub window: OpenPlMap,
}

impl GeneralDiagonalMap {
    pub fn new(target: usize, source: usize, window: OpenPlMap) -> Result<Self> {
        if source < target {
            return Err(Error::Precondition(format!(
                "source coordinate {source} below target {target}"
            )));
        }
        if !window.value_at_zero().is_zero() {
            return Err(Error::NonzeroAtOrigin(window.value_at_zero().clone()));
        }
        Ok(GeneralDiagonalMap { target, source, window })
    }

    pub fn from_homeo(f: &DiagonalHomeo) -> Self {
        GeneralDiagonalMap {
            target: f.base,
            source: f.base,
            window: OpenPlMap::from(f.inducer.clone()),
        }
    }

    /// The same map with source coordinate `s`, via `π_j = T_{p_{j+1}} ∘ π_{j+1}`.
    pub fn with_source(&self, s: usize, primes: &PrimeSequence) -> Result<Self> {
        if s < self.source {
            return Err(Error::Precondition(format!(
                "cannot lower the source coordinate from {} to {s}",
                self.source
            )));
        }
        let d = primes.span(self.source + 1, s);
        let window = self.window.compose(tent(d)?.as_open());
        Ok(GeneralDiagonalMap { target: self.target, source: s, window })
    }

    /// `self ∘ other`. Needs `other.target ≥ self.source`.
    pub fn compose(&self, other: &GeneralDiagonalMap, primes: &PrimeSequence) -> Result<Self> {
        let outer = self.with_source(other.target, primes)?;
        Ok(GeneralDiagonalMap {
            target: outer.target,
            source: other.source,
            window: outer.window.compose(&other.window),
        })
    }
}

/// `deg(w) / (p_{target+1} ⋯ p_source)`.
pub fn degree_diagonal(f: &GeneralDiagonalMap, primes: &PrimeSequence) -> Rational {
    Rational::from(f.window.degree() as u64) / Rational::from(primes.span(f.target + 1, f.source))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn g() -> PlHomeo {
        PlHomeo::from_pairs(&[((0, 1), (0, 1)), ((1, 2), (3, 4)), ((1, 1), (1, 1))]).unwrap()
    }

    #[test]
    fn lift_examples() {
        let all2 = PrimeSequence::All2;
        let f = DiagonalHomeo::new(0, g());
        assert_eq!(f.lift(0, &all2).unwrap(), f);
        assert_eq!(f.lift(1, &all2).unwrap().inducer, oplus_power(&g(), 2).unwrap());
        let diag = PrimeSequence::Diagonal;
        let twice = f.lift(2, &diag).unwrap().lift(4, &diag).unwrap();
        assert_eq!(twice, f.lift(4, &diag).unwrap());
        assert!(f.same_as(&f.lift(3, &diag).unwrap(), &diag).unwrap());
    }

    #[test]
    fn eval_examples() {
        let diag = PrimeSequence::Diagonal;
        let x = extend_point(&q(2, 7), 3, &diag).unwrap();
        assert_eq!(eval_diagonal(&DiagonalHomeo::identity(), &x, &diag).unwrap(), x);
        let x0 = TruncatedKnasterPoint::new(vec![q(1, 2)], &diag).unwrap();
        let y0 = eval_diagonal(&DiagonalHomeo::new(0, g()), &x0, &diag).unwrap();
        assert_eq!(y0.coords(), &[q(3, 4)]);
        let y = eval_diagonal(&DiagonalHomeo::new(1, g()), &x, &diag).unwrap();
        assert!(y.is_coherent(&diag));
        assert!(eval_diagonal(&DiagonalHomeo::new(4, g()), &x, &diag).is_err());
    }

    #[test]
    fn diag_dist_example() {
        let all2 = PrimeSequence::All2;
        let f = DiagonalHomeo::new(0, g());
        let id = DiagonalHomeo::identity();
        assert!(diag_dist(&f, &f, 3, &all2).unwrap().lower.is_zero());
        let d = diag_dist(&f, &id, 1, &all2).unwrap();
        // direct formula on a grid containing every breakpoint
        let og = oplus_power(&g(), 2).unwrap();
        let best = (0..=96)
            .map(|k| {
                let t = q(k, 96);
                let t2 = crate::tent::tent_value(2, &t);
                q(1, 2) * (g().eval(&t2).unwrap() - &t2).abs() + q(1, 2) * (og.eval(&t).unwrap() - &t).abs()
            })
            .max()
            .unwrap();
        assert_eq!(d.lower, best);
        assert_eq!(d.lower, q(3, 16));
        assert_eq!(d.upper, q(3, 16) + q(1, 2));
        assert!(diag_dist(&f, &id, 2, &all2).unwrap().lower >= d.lower);
    }

    #[test]
    fn degree_examples() {
        let all2 = PrimeSequence::All2;
        let one = GeneralDiagonalMap::from_homeo(&DiagonalHomeo::new(2, g()));
        assert_eq!(degree_diagonal(&one, &all2), q(1, 1));
        let t4 = GeneralDiagonalMap::new(0, 1, tent(4).unwrap().into_open()).unwrap();
        assert_eq!(degree_diagonal(&t4, &all2), q(2, 1));
        let t2 = GeneralDiagonalMap::new(0, 1, tent(2).unwrap().into_open()).unwrap();
        assert_eq!(degree_diagonal(&t2, &all2), q(1, 1));
        let lifted = t4.with_source(3, &all2).unwrap();
        assert_eq!(degree_diagonal(&lifted, &all2), q(2, 1));
    }
}
