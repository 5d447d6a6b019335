//! Blockwise conjugation near `⊕ᵈ(f)`.
//!
//! If `h` fixes every grid point `i/d`, it splits as `⊕(h_0, …, h_{d−1})` with
//! `h_i(x) = d·h((x + i)/d) − i`. Conjugating each block separately (against
//! `f` on even blocks, `f̃` on odd ones) and summing the parts gives a
//! conjugator whose distance from the identity shrinks by the factor `d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::PlHomeo;
use crate::pl::{PlFn, Point};
use crate::rational::Rational;
use crate::tent::{block_sum, oplus_power};

use super::conjugator::approx_conjugator;
use super::signature::{Layout, Sign};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockConjugate {
    pub conjugator: PlHomeo,
    pub parts: Vec<PlHomeo>,
    /// `sup |g⁻¹∘⊕ᵈ(f)∘g − h|`
    pub distance: Rational,
    /// `sup |g − id|`
    pub norm: Rational,
    /// `max_i sup |g_i − id|`
    pub max_part_norm: Rational,
}

/// Block `i` of `h` rescaled to `[0,1]`. `h` must fix `i/d` and `(i+1)/d`.
pub fn grid_block(h: &PlHomeo, d: u64, i: u64) -> Result<PlHomeo> {
    let dd = Rational::from(d);
    let lo = Rational::from(i) / &dd;
    let hi = Rational::from(i + 1) / &dd;
    let piece = h.as_fn().restrict(&lo, &hi)?;
    let shift = -Rational::from(i);
    PlHomeo::from_fn(piece.rescale(&dd, &shift, &dd, &shift))
}

fn check_grid(h: &PlHomeo, d: u64) -> Result<()> {
    for i in 1..d {
        let c = Rational::new(i as i64, d as i64);
        if h.eval(&c)? != c {
            return Err(Error::GridNotFixed(c));
        }
    }
    Ok(())
}

/// Returns `g` with `sup |g⁻¹∘⊕ᵈ(f)∘g − h| < η`, built block by block.
pub fn grid_block_conjugate(f: &PlHomeo, d: u64, h: &PlHomeo, eta: &Rational) -> Result<PlHomeo> {
    grid_block_conjugate_certified(f, d, h, eta).map(|b| b.conjugator)
}

pub fn grid_block_conjugate_certified(
    f: &PlHomeo,
    d: u64,
    h: &PlHomeo,
    eta: &Rational,
) -> Result<BlockConjugate> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    check_grid(h, d)?;
    let block_eta = eta * Rational::from(d);
    let mut parts = Vec::with_capacity(d as usize);
    for i in 0..d {
        let hi = grid_block(h, d, i)?;
        let part = if i % 2 == 0 {
            approx_conjugator(f, &hi, &block_eta)?
        } else {
            // g̃⁻¹ f̃ g̃ is the reflection of g⁻¹ f g
            approx_conjugator(f, &hi.reflect(), &block_eta)?.reflect()
        };
        parts.push(part);
    }
    let g = block_sum(&parts)?;
    let conj = oplus_power(f, d)?.conjugate_by(&g);
    let (distance, at) = conj.sup_dist(h);
    if &distance >= eta {
        return Err(Error::Counterexample(format!(
            "block conjugator misses tolerance {eta}: distance {distance} at x = {at}"
        )));
    }
    let id = PlHomeo::identity();
    let norm = g.sup_dist(&id).0;
    let max_part_norm = parts
        .iter()
        .map(|p| p.sup_dist(&id).0)
        .max()
        .unwrap_or_else(Rational::zero);
    if norm != &max_part_norm / Rational::from(d) {
        return Err(Error::Counterexample(format!(
            "block sum norm {norm} differs from {max_part_norm}/{d}"
        )));
    }
    Ok(BlockConjugate {
        conjugator: g,
        parts,
        distance,
        norm,
        max_part_norm,
    })
}

/// Squeeze schedule for the cut line: `κ = 1 − 2^{−j}`.
const SQUEEZE_STEPS: u32 = 24;

/// Makes every grid point `i/d` fixed by squeezing the component of `h`
/// that contains it towards the identity, keeping `h` elsewhere. On a
/// positive component `(a, b)` around `c` the result is `min(h, L)` with `L`
/// the two-piece line through `(a, a + κ(c − a))`, `(c, c)`,
/// `(b, b + κ(b − c))`; negative components are mirrored. The result stays
/// between the identity and `h`, and must remain within `δ/d` of `reference`.
pub fn snap_to_grid(
    h: &PlHomeo,
    d: u64,
    reference: &PlHomeo,
    delta: &Rational,
) -> Result<PlHomeo> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    let radius = delta / Rational::from(d);
    let start = h.sup_dist(reference).0;
    if start >= radius {
        return Err(Error::Precondition(format!(
            "h is {start} from the reference, not within {radius}"
        )));
    }
    let mut cur = h.clone();
    for i in 1..d {
        let c = Rational::new(i as i64, d as i64);
        let layout = Layout::of(&cur);
        let Some(comp) = layout.component_containing(&c).cloned() else {
            continue;
        };
        let window = cur.as_fn().restrict(&comp.lo, &comp.hi)?;
        let mut snapped = None;
        for j in 1..=SQUEEZE_STEPS {
            let kappa = Rational::one() - Rational::new(1, 1i64 << j);
            let cand = squeeze(&cur, &window, &comp.lo, &c, &comp.hi, comp.sign, &kappa)?;
            if cand.sup_dist(reference).0 < radius {
                snapped = Some(cand);
                break;
            }
        }
        cur = snapped.ok_or_else(|| {
            Error::Precondition(format!(
                "δ = {delta} leaves no room to fix {c}: every squeeze leaves the δ/d ball"
            ))
        })?;
    }
    Ok(cur)
}

fn squeeze(
    h: &PlHomeo,
    window: &PlFn,
    a: &Rational,
    c: &Rational,
    b: &Rational,
    sign: Sign,
    kappa: &Rational,
) -> Result<PlHomeo> {
    let (ya, yb) = match sign {
        Sign::Positive => (a + kappa * (c - a), b + kappa * (b - c)),
        Sign::Negative => (a - kappa * (c - a), b - kappa * (b - c)),
    };
    let line = PlFn::new(vec![(a.clone(), ya), (c.clone(), c.clone()), (b.clone(), yb)])?;
    let middle = match sign {
        Sign::Positive => window.pointwise_min(&line)?,
        Sign::Negative => window.pointwise_max(&line)?,
    };
    let mut pts: Vec<Point> = h.breakpoints().iter().filter(|p| &p.0 < a).cloned().collect();
    pts.extend(middle.into_points());
    pts.extend(h.breakpoints().iter().filter(|p| &p.0 > b).cloned());
    PlHomeo::from_fn(PlFn::from_pieces(pts))
}
