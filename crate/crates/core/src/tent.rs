//! Tent maps, block sums and the straightening construction.
//!
//! The degree-`d` tent map is `T_d(x) = dx − m` on `[m/d, (m+1)/d]` for even
//! `m` and `1 + m − dx` for odd `m`. The block sum `⊕(f_0, …, f_{n−1})` acts on
//! `[i/n, (i+1)/n]` as `(1/n)·f_i(nx − i) + i/n`, and `⊕ᵈ(g)` alternates `g`
//! with its reflection. These satisfy `g ∘ T_d = T_d ∘ ⊕ᵈ(g)`, which is what
//! makes the lift of a diagonal homeomorphism well defined.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::map::{OpenPlMap, PlHomeo, PlMap};
use crate::pl::{PlFn, Point};
use crate::rational::Rational;

/// The standard degree-`d` tent map together with its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TentMap {
    d: u64,
    map: OpenPlMap,
}

impl TentMap {
    pub fn degree(&self) -> u64 {
        self.d
    }

    pub fn as_open(&self) -> &OpenPlMap {
        &self.map
    }

    pub fn as_map(&self) -> &PlMap {
        self.map.as_map()
    }

    pub fn into_open(self) -> OpenPlMap {
        self.map
    }

    /// Direct evaluation by the tent formula (no breakpoint search).
    pub fn apply(&self, x: &Rational) -> Rational {
        tent_value(self.d, x)
    }
}

/// `T_d(x)` by the closed formula. `x` must lie in `[0,1]`.
pub fn tent_value(d: u64, x: &Rational) -> Rational {
    let dx = Rational::from(d) * x;
    let m = dx.floor_i64().expect("small tent degree").min(d as i64 - 1);
    if m % 2 == 0 {
        dx - Rational::from_int(m)
    } else {
        Rational::from_int(1 + m) - dx
    }
}

pub fn tent(d: u64) -> Result<TentMap> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    let dd = d as i64;
    let pts = (0..=dd)
        .map(|m| (Rational::new(m, dd), Rational::from_int(m % 2)))
        .collect();
    let map = OpenPlMap::new(pts)?;
    Ok(TentMap { d, map })
}

/// `⊕(parts)`.
pub fn block_sum(parts: &[PlHomeo]) -> Result<PlHomeo> {
    if parts.is_empty() {
        return Err(Error::EmptyBlockSum);
    }
    let n = Rational::from(parts.len() as u64);
    let scale = n.recip();
    let mut pts: Vec<Point> = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let shift = Rational::from(i as u64) / &n;
        let piece = part.as_fn().rescale(&scale, &shift, &scale, &shift);
        pts.extend(piece.into_points());
    }
    Ok(PlHomeo::from_fn_unchecked(PlFn::from_pieces(pts)))
}

/// `⊕ᵈ(g) = ⊕(g, g̃, g, g̃, …)` with `d` blocks.
pub fn oplus_power(g: &PlHomeo, d: u64) -> Result<PlHomeo> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    if d == 1 {
        return Ok(g.clone());
    }
    let r = g.reflect();
    let parts: Vec<PlHomeo> = (0..d)
        .map(|i| if i % 2 == 0 { g.clone() } else { r.clone() })
        .collect();
    block_sum(&parts)
}

/// Outcome of checking `g ∘ T_d = T_d ∘ ⊕ᵈ(g)`.
#[derive(Clone, Debug, Serialize)]
pub struct SemiconjugacyRecord {
    pub d: u64,
    /// `g ∘ T_d`
    pub lhs: PlMap,
    /// `T_d ∘ ⊕ᵈ(g)`
    pub rhs: PlMap,
    pub equal: bool,
    /// A point where the two sides differ, if any.
    pub counterexample: Option<Rational>,
}

pub fn verify_semiconjugacy(g: &PlHomeo, d: u64) -> Result<SemiconjugacyRecord> {
    let t = tent(d)?;
    let lhs = g.as_map().compose(t.as_map());
    let rhs = t.as_map().compose(oplus_power(g, d)?.as_map());
    let equal = lhs == rhs;
    let counterexample = if equal {
        None
    } else {
        Some(lhs.sup_dist(&rhs).1)
    };
    Ok(SemiconjugacyRecord {
        d,
        lhs,
        rhs,
        equal,
        counterexample,
    })
}

/// Finds `h` with `f = g ∘ h` for open maps of equal degree with
/// `f(0) = g(0) = 0`. On the `j`-th lap `I_j` of `f` and `K_j` of `g`,
/// `h = (g|K_j)⁻¹ ∘ f|I_j`.
pub fn straighten(f: &OpenPlMap, g: &OpenPlMap) -> Result<PlHomeo> {
    for m in [f, g] {
        if !m.value_at_zero().is_zero() {
            return Err(Error::NonzeroAtOrigin(m.value_at_zero().clone()));
        }
    }
    let (lf, lg) = (f.lap_boundaries(), g.lap_boundaries());
    if lf.len() != lg.len() {
        return Err(Error::DegreeMismatch(lf.len() - 1, lg.len() - 1));
    }
    let mut pts: Vec<Point> = Vec::new();
    for j in 0..lf.len() - 1 {
        let f_lap = f.as_fn().restrict(&lf[j], &lf[j + 1])?;
        let g_lap_inv = g.as_fn().restrict(&lg[j], &lg[j + 1])?.inverse()?;
        let piece = f_lap.then(&g_lap_inv)?;
        // consecutive laps share one endpoint; both pieces must agree there
        if let Some(last) = pts.last() {
            debug_assert_eq!(last.0, *piece.lo());
            if last.1 != *piece.first_value() {
                return Err(Error::Counterexample(format!(
                    "lap pieces disagree at {}: {} vs {}",
                    last.0,
                    last.1,
                    piece.first_value()
                )));
            }
        }
        pts.extend(piece.into_points());
    }
    let h = PlHomeo::from_fn(PlFn::from_pieces(pts))?;
    if g.compose_homeo(&h) != *f {
        return Err(Error::Counterexample("g ∘ h differs from f".into()));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn g0() -> PlHomeo {
        PlHomeo::from_pairs(&[((0, 1), (0, 1)), ((1, 2), (3, 4)), ((1, 1), (1, 1))]).unwrap()
    }

    #[test]
    fn tent_examples() {
        assert!(tent(1).unwrap().as_map().is_identity());
        let t2 = tent(2).unwrap();
        assert_eq!(
            t2.as_map(),
            &PlMap::from_pairs(&[((0, 1), (0, 1)), ((1, 2), (1, 1)), ((1, 1), (0, 1))]).unwrap()
        );
        let t5 = tent(5).unwrap();
        assert_eq!(t5.as_map().eval(&q(3, 10)).unwrap(), q(1, 2));
        assert_eq!(t5.as_open().degree(), 5);
        assert_eq!(t5.as_map().breakpoints().len(), 6);
        assert!(matches!(tent(0), Err(Error::ZeroDegree)));
    }

    #[test]
    fn tent_formula_matches_realization() {
        for d in 1..=9u64 {
            let t = tent(d).unwrap();
            for k in 0..=60 {
                let x = q(k, 60);
                assert_eq!(t.apply(&x), t.as_map().eval(&x).unwrap(), "d={d} x={x}");
            }
        }
    }

    #[test]
    fn block_sum_examples() {
        let id = PlHomeo::identity();
        assert!(block_sum(&[id.clone(), id.clone()]).unwrap().is_identity());
        let s = block_sum(&[g0(), g0().reflect()]).unwrap();
        assert_eq!(s.eval(&q(1, 4)).unwrap(), q(3, 8));
        let three = block_sum(&[g0(), id, g0().reflect()]).unwrap();
        assert_eq!(three.eval(&q(1, 3)).unwrap(), q(1, 3));
        assert_eq!(three.eval(&q(2, 3)).unwrap(), q(2, 3));
        assert!(matches!(block_sum(&[]), Err(Error::EmptyBlockSum)));
    }

    #[test]
    fn oplus_examples() {
        assert_eq!(oplus_power(&g0(), 1).unwrap(), g0());
        assert!(oplus_power(&PlHomeo::identity(), 5).unwrap().is_identity());
        let o2 = oplus_power(&g0(), 2).unwrap();
        let expected = q(1, 2) + q(1, 2) * g0().reflect().eval(&q(1, 2)).unwrap();
        assert_eq!(o2.eval(&q(3, 4)).unwrap(), expected);
    }

    #[test]
    fn semiconjugacy_examples() {
        assert!(verify_semiconjugacy(&PlHomeo::identity(), 3).unwrap().equal);
        let rec = verify_semiconjugacy(&g0(), 2).unwrap();
        assert!(rec.equal);
        assert!(rec.counterexample.is_none());
    }

    #[test]
    fn straighten_examples() {
        let t2 = tent(2).unwrap().into_open();
        let t4 = tent(4).unwrap().into_open();
        assert!(straighten(&t2, &t2).unwrap().is_identity());
        assert!(straighten(&t4, &t2.compose(&t2)).unwrap().is_identity());
        let moved =
            OpenPlMap::from_pairs(&[((0, 1), (0, 1)), ((1, 3), (1, 1)), ((1, 1), (0, 1))]).unwrap();
        let h = straighten(&t2, &moved).unwrap();
        let expected =
            PlHomeo::from_pairs(&[((0, 1), (0, 1)), ((1, 2), (1, 3)), ((1, 1), (1, 1))]).unwrap();
        assert_eq!(h, expected);
        // arguments swapped: moved = T₂ ∘ h′ with h′ = (0,0),(1/3,1/2),(1,1)
        let h_swapped = straighten(&moved, &t2).unwrap();
        let expected =
            PlHomeo::from_pairs(&[((0, 1), (0, 1)), ((1, 3), (1, 2)), ((1, 1), (1, 1))]).unwrap();
        assert_eq!(h_swapped, expected);
    }

    #[test]
    fn straighten_errors() {
        let t2 = tent(2).unwrap().into_open();
        let t3 = tent(3).unwrap().into_open();
        assert!(matches!(straighten(&t2, &t3), Err(Error::DegreeMismatch(2, 3))));
        let flipped =
            OpenPlMap::from_pairs(&[((0, 1), (1, 1)), ((1, 2), (0, 1)), ((1, 1), (1, 1))]).unwrap();
        assert!(matches!(straighten(&flipped, &t2), Err(Error::NonzeroAtOrigin(_))));
    }
}
