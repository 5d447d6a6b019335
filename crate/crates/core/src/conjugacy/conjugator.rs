//! Approximate conjugator synthesis.
//!
//! Given `f` and `g` with equal signatures, build a PL homeomorphism `h` with
//! `sup |h⁻¹∘f∘h − g| < η`, checked exactly before returning.
//!
//! 1. Edit `g` by less than `η/4` so that every gap of `g` has the same shape
//!    (point or interval) as the matching gap of `f`.
//! 2. Map each gap of `g` affinely onto the matching gap of `f`.
//! 3. On each matched pair of components, pick base points `b` (for `g`) and
//!    `a` (for `f`), send the fundamental domain `[b, g(b)]` affinely onto
//!    `[a, f(a)]`, and extend equivariantly (`h ∘ g = f ∘ h`) over `N` domains
//!    on each side. The two remaining tails are glued affinely once both
//!    orbits are within `η/2` of the component ends.
//!
//! Exact orbits have denominators that grow with every iterate, so orbit
//! points and piece breakpoints are rounded to a fixed number of significant
//! bits relative to the nearer component end. Equivariance then holds up to
//! the rounding, and the precision grows whenever the exact check fails.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::PlHomeo;
use crate::pl::{PlFn, Point};
use crate::rational::Rational;

use super::signature::{Component, Layout, Sign};
use super::surgery::{close_gap, open_gap};

/// Hard cap on orbit iterations per component side.
pub const ORBIT_CAP: usize = 1_000_000;

/// Precision increases tried before reporting a miss.
const PRECISION_ATTEMPTS: u64 = 6;


/// A conjugator with its exact post hoc certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugatorCertificate {
    pub f: PlHomeo,
    pub g: PlHomeo,
    pub conjugator: PlHomeo,
    /// `sup |h⁻¹∘f∘h − g|`
    pub distance: Rational,
    pub eta: Rational,
}

/// Returns `h` with `sup_dist(h⁻¹∘f∘h, g) < eta`, verified exactly.
pub fn approx_conjugator(f: &PlHomeo, g: &PlHomeo, eta: &Rational) -> Result<PlHomeo> {
    approx_conjugator_certified(f, g, eta).map(|c| c.conjugator)
}

pub fn approx_conjugator_certified(
    f: &PlHomeo,
    g: &PlHomeo,
    eta: &Rational,
) -> Result<ConjugatorCertificate> {
    approx_conjugator_with_cap(f, g, eta, ORBIT_CAP)
}

pub fn approx_conjugator_with_cap(
    f: &PlHomeo,
    g: &PlHomeo,
    eta: &Rational,
    cap: usize,
) -> Result<ConjugatorCertificate> {
    if !eta.is_positive() {
        return Err(Error::Precondition(format!("tolerance must be positive, got {eta}")));
    }
    let lf = Layout::of(f);
    let lg = Layout::of(g);
    if lf.signature() != lg.signature() {
        return Err(Error::SignatureMismatch(
            lf.signature().to_string(),
            lg.signature().to_string(),
        ));
    }
    let certificate = |h: PlHomeo, distance: Rational| ConjugatorCertificate {
        f: f.clone(),
        g: g.clone(),
        conjugator: h,
        distance,
        eta: eta.clone(),
    };
    if f == g {
        return Ok(certificate(PlHomeo::identity(), Rational::zero()));
    }
    let g2 = match_gaps(&lf, g, &(eta / Rational::from_int(4)))?;
    let lg2 = Layout::of(&g2);
    let tol = eta / Rational::from_int(2);
    let scale_bits = tol.recip().floor().bits();
    let mut miss: Option<(Rational, Rational)> = None;
    for attempt in 0..PRECISION_ATTEMPTS {
        let bits = scale_bits + 16 + 16 * attempt;
        let Some(h) = build(f, &lf, &g2, &lg2, &tol, cap, bits)? else {
            continue;
        };
        let (distance, at) = f.conjugate_by(&h).sup_dist(g);
        if &distance < eta {
            return Ok(certificate(h, distance));
        }
        miss = Some((distance, at));
    }
    Err(Error::Counterexample(match miss {
        Some((distance, at)) => {
            format!("conjugator misses tolerance {eta}: distance {distance} at x = {at}")
        }
        None => format!("rounded orbits collapsed at every precision for tolerance {eta}"),
    }))
}

/// Edits `g` gap by gap until its gap shapes agree with `lf`.
fn match_gaps(lf: &Layout, g: &PlHomeo, tol: &Rational) -> Result<PlHomeo> {
    let mut g = g.clone();
    for i in 0..lf.num_gaps() {
        let want_interval = lf.gap_is_interval(i);
        let has_interval = Layout::of(&g).gap_is_interval(i);
        if want_interval && !has_interval {
            g = open_gap(&g, i, tol).0;
        } else if !want_interval && has_interval {
            g = close_gap(&g, i, tol)?;
        }
    }
    Ok(g)
}

fn build(
    f: &PlHomeo,
    lf: &Layout,
    g: &PlHomeo,
    lg: &Layout,
    tol: &Rational,
    cap: usize,
    bits: u64,
) -> Result<Option<PlHomeo>> {
    let (f_inv, g_inv) = (f.invert(), g.invert());
    let mut pts: Vec<Point> = Vec::new();
    for i in 0..lf.num_gaps() {
        let (a, b) = lg.gap(i);
        let (c, d) = lf.gap(i);
        pts.push((a, c));
        pts.push((b, d));
        if i < lf.components.len() {
            let (cf, cg) = (&lf.components[i], &lg.components[i]);
            let piece = match cf.sign {
                Sign::Positive => component_piece(f, g, &f_inv, &g_inv, cf, cg, tol, cap, bits)?,
                // h⁻¹ f h = g  ⇔  h⁻¹ f⁻¹ h = g⁻¹, and the inverses are positive here
                Sign::Negative => component_piece(&f_inv, &g_inv, f, g, cf, cg, tol, cap, bits)?,
            };
            match piece {
                Some(piece) => pts.extend(piece),
                None => return Ok(None),
            }
        }
    }
    PlHomeo::from_fn(PlFn::from_pieces(pts)).map(Some)
}

/// Conjugator on one component where `f` and `g` move points upward (the
/// caller passes inverses for negative components). Returns breakpoints
/// covering `[cg.lo, cg.hi]`, or `None` if rounding broke their order.
///
/// With `b_k` the rounded orbit of `b` under `g`, domain `k` is
/// `[b_k, b_{k+1}]`. Piece `k` is `f ∘ piece_{k−1} ∘ g⁻¹` (backward pieces
/// use `f⁻¹` and `g`) computed exactly on the unrounded domain, then rounded
/// coordinate by coordinate. The rounding is deterministic, so neighbouring
/// pieces still agree at `b_k`. With `n` forward and `n'` backward domains,
/// the glued tails `[b_n, cg.hi]` and `[cg.lo, b_{−n'}]` contribute errors
/// below `hi − b_{n−1}` and `b_{−(n'−1)} − lo` for either orientation, so
/// each side stops on its own.
#[allow(clippy::too_many_arguments)]
fn component_piece(
    f: &PlHomeo,
    g: &PlHomeo,
    f_inv: &PlHomeo,
    g_inv: &PlHomeo,
    cf: &Component,
    cg: &Component,
    tol: &Rational,
    cap: usize,
    bits: u64,
) -> Result<Option<Vec<Point>>> {
    let sx = |x: Rational| snap_relative(x, cg, bits);
    let sy = |y: Rational| snap_relative(y, cf, bits);
    // Rounds the interior and pins the ends to the shared orbit points. An
    // interior breakpoint that rounding pushes out of order lies within the
    // rounding error of its neighbour and is dropped.
    let round_piece = |piece: PlFn, start: Point, end: Point| -> Option<PlFn> {
        let inner = &piece.points()[1..piece.points().len() - 1];
        let mut pts: Vec<Point> = vec![start];
        for (x, y) in inner {
            let p = (sx(x.clone()), sy(y.clone()));
            let last = pts.last().unwrap();
            if last.0 < p.0 && last.1 < p.1 && p.0 < end.0 && p.1 < end.1 {
                pts.push(p);
            }
        }
        let last = pts.last().unwrap();
        (last.0 < end.0 && last.1 < end.1).then(|| {
            pts.push(end);
            PlFn::from_pieces(pts)
        })
    };
    let a = sy(Rational::midpoint(&cf.lo, &cf.hi));
    let b = sx(Rational::midpoint(&cg.lo, &cg.hi));
    let (mut af, mut ab) = (vec![a.clone()], vec![a]);
    let (mut bf, mut bb) = (vec![b.clone()], vec![b]);
    let step = |m: &PlHomeo, v: &mut Vec<Rational>, snap: &dyn Fn(Rational) -> Rational| -> Result<()> {
        if v.len() > cap {
            return Err(Error::OrbitCap(cap));
        }
        let next = snap(m.eval(v.last().unwrap())?);
        v.push(next);
        Ok(())
    };
    // Each side takes one step past the first orbit point within `tol` of
    // its end, which covers both orientations of the glued tail.
    loop {
        let done = bf.len() > 1 && &cg.hi - bf.last().unwrap() < *tol;
        step(f, &mut af, &sy)?;
        step(g, &mut bf, &sx)?;
        if done {
            break;
        }
    }
    loop {
        let done = bb.len() > 1 && bb.last().unwrap() - &cg.lo < *tol;
        step(f_inv, &mut ab, &sy)?;
        step(g_inv, &mut bb, &sx)?;
        if done {
            break;
        }
    }
    let (n_fwd, n_bwd) = (bf.len() - 1, bb.len() - 1);
    let ordered = |v: &[Rational], lo: &Rational, hi: &Rational| {
        v.last().is_some_and(|x| x > lo && x < hi)
    };
    if !(ordered(&bf, &cg.lo, &cg.hi)
        && ordered(&bb, &cg.lo, &cg.hi)
        && ordered(&af, &cf.lo, &cf.hi)
        && ordered(&ab, &cf.lo, &cf.hi))
    {
        return Ok(None);
    }

    let at = |xs: &[Rational], ys: &[Rational], k: usize| (xs[k].clone(), ys[k].clone());
    let base = PlFn::affine(bf[0].clone(), bf[1].clone(), af[0].clone(), af[1].clone());
    if !(bf[0] < bf[1] && af[0] < af[1]) {
        return Ok(None);
    }
    let mut forward = vec![base.clone()];
    for k in 1..n_fwd {
        let prev = forward.last().unwrap();
        let piece = g_inv
            .as_fn()
            .restrict(&g.eval(prev.lo())?, &g.eval(prev.hi())?)?
            .then(prev)?
            .then(f.as_fn())?;
        let Some(piece) = round_piece(piece, at(&bf, &af, k), at(&bf, &af, k + 1)) else {
            return Ok(None);
        };
        forward.push(piece);
    }
    let mut backward: Vec<PlFn> = Vec::new();
    for k in 1..=n_bwd {
        // domain −k is [b_{−k}, b_{−k+1}]
        let next = backward.last().unwrap_or(&base);
        let piece = g
            .as_fn()
            .restrict(&g_inv.eval(next.lo())?, &g_inv.eval(next.hi())?)?
            .then(next)?
            .then(f_inv.as_fn())?;
        let Some(piece) = round_piece(piece, at(&bb, &ab, k), at(&bb, &ab, k - 1)) else {
            return Ok(None);
        };
        backward.push(piece);
    }

    let mut pts: Vec<Point> = vec![(cg.lo.clone(), cf.lo.clone())];
    for piece in backward.iter().rev().chain(forward.iter()) {
        pts.extend(piece.points().iter().cloned());
    }
    pts.push((cg.hi.clone(), cf.hi.clone()));
    pts.dedup_by(|q, p| p.0 == q.0 && p.1 == q.1);
    let increasing = pts.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1);
    Ok(increasing.then_some(pts))
}

/// Rounds `x` inside `comp` to about `bits` significant bits of its distance
/// to the nearer end, so orbits converging to an end keep their order.
fn snap_relative(x: Rational, comp: &Component, bits: u64) -> Rational {
    let (end, offset) = if &x - &comp.lo <= &comp.hi - &x {
        (&comp.lo, &x - &comp.lo)
    } else {
        (&comp.hi, &x - &comp.hi)
    };
    if offset.is_zero() {
        return x;
    }
    let magnitude = offset.numer().bits() as i64 - offset.denom().bits() as i64;
    let shift = (bits as i64 - magnitude).max(0) as usize;
    end + offset.round_to(&(BigInt::one() << shift))
}
