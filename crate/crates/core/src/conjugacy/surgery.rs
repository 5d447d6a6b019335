//! Small exact edits of a homeomorphism's fixed-point layout.
//!
//! Each edit changes the map only inside a short window around one gap and
//! moves it by strictly less than the requested tolerance. The edits are what
//! make approximate conjugacy possible between maps whose signatures agree
//! but whose gaps differ (a fixed point on one side, a fixed interval on the
//! other), and they let a target be refined to a longer signature.

use crate::error::{Error, Result};
use crate::map::PlHomeo;
use crate::pl::{PlFn, Point};
use crate::rational::Rational;

use super::signature::{Component, FixedSignature, Layout, Sign};

/// Which end of a component a point should approach.
#[derive(Clone, Copy, PartialEq, Eq)]
enum End {
    Lo,
    Hi,
}

/// A point `p` inside `comp`, in the half next to `end`, such that
/// `|f(x) − x| < tol` for every `x` between `p` and that end.
fn approach(disp: &PlFn, comp: &Component, end: End, tol: &Rational) -> Rational {
    let mid = Rational::midpoint(&comp.lo, &comp.hi);
    let two = Rational::from_int(2);
    let mut p = mid;
    loop {
        let (a, b) = match end {
            End::Lo => (&comp.lo, &p),
            End::Hi => (&p, &comp.hi),
        };
        let sup = disp.restrict(a, b).expect("inside domain").abs().max_value();
        if &sup < tol {
            return p;
        }
        p = match end {
            End::Lo => (&comp.lo + &p) / &two,
            End::Hi => (&comp.hi + &p) / &two,
        };
    }
}

/// Replaces `f` on `[lo, hi]` by the polyline through `middle` (which must
/// start at `lo` and end at `hi`).
fn splice(f: &PlHomeo, middle: Vec<Point>) -> PlHomeo {
    let lo = &middle[0].0;
    let hi = &middle[middle.len() - 1].0;
    let mut pts: Vec<Point> = f
        .breakpoints()
        .iter()
        .filter(|p| &p.0 < lo)
        .cloned()
        .collect();
    pts.extend(middle.iter().cloned());
    pts.extend(f.breakpoints().iter().filter(|p| &p.0 > hi).cloned());
    PlHomeo::from_fn(PlFn::from_pieces(pts)).expect("splice keeps a homeomorphism")
}

fn value(f: &PlHomeo, x: &Rational) -> Rational {
    f.eval(x).expect("inside [0,1]")
}

/// Makes gap `i` of `f` a fixed interval of positive length. Returns the edited
/// map and an interval `[u, v]`, `u < v`, on which it is the identity. The
/// signature is unchanged and the edit moves `f` by less than `tol`.
pub fn open_gap(f: &PlHomeo, i: usize, tol: &Rational) -> (PlHomeo, Rational, Rational) {
    let layout = Layout::of(f);
    let (lo, hi) = layout.gap(i);
    if lo < hi {
        return (f.clone(), lo, hi);
    }
    let c = lo;
    let k = layout.components.len();
    let disp = f.displacement();
    let two = Rational::from_int(2);
    let mut middle = Vec::new();
    let m1 = if i > 0 {
        let p = approach(&disp, &layout.components[i - 1], End::Hi, tol);
        let fp = value(f, &p);
        let m1 = (p.clone().max(fp.clone()) + &c) / &two;
        middle.push((p, fp));
        middle.push((m1.clone(), m1.clone()));
        m1
    } else {
        middle.push((Rational::zero(), Rational::zero()));
        Rational::zero()
    };
    let m2 = if i < k {
        let q = approach(&disp, &layout.components[i], End::Lo, tol);
        let fq = value(f, &q);
        let m2 = (&c + q.clone().min(fq.clone())) / &two;
        middle.push((m2.clone(), m2.clone()));
        middle.push((q, fq));
        m2
    } else {
        middle.push((Rational::one(), Rational::one()));
        Rational::one()
    };
    (splice(f, middle), m1, m2)
}

/// Collapses the fixed interval at gap `i` to a single fixed point (or, for
/// the outer gaps, to the endpoint itself). Requires at least one component.
pub fn close_gap(f: &PlHomeo, i: usize, tol: &Rational) -> Result<PlHomeo> {
    let layout = Layout::of(f);
    let k = layout.components.len();
    let (lo, hi) = layout.gap(i);
    if lo == hi {
        return Ok(f.clone());
    }
    if k == 0 {
        return Err(Error::Precondition("cannot close the gap of the identity".into()));
    }
    let disp = f.displacement();
    let mut middle = Vec::new();
    if i > 0 {
        let p = approach(&disp, &layout.components[i - 1], End::Hi, tol);
        let fp = value(f, &p);
        middle.push((p, fp));
    } else {
        middle.push((Rational::zero(), Rational::zero()));
    }
    if i > 0 && i < k {
        let m = Rational::midpoint(&lo, &hi);
        middle.push((m.clone(), m));
    }
    if i < k {
        let q = approach(&disp, &layout.components[i], End::Lo, tol);
        let fq = value(f, &q);
        middle.push((q, fq));
    } else {
        middle.push((Rational::one(), Rational::one()));
    }
    Ok(splice(f, middle))
}

/// Inserts one small bump per sign into `[u, v]`, where `f` must be the
/// identity. Bump heights stay below `tol`.
pub fn insert_bumps(
    f: &PlHomeo,
    u: &Rational,
    v: &Rational,
    signs: &[Sign],
    tol: &Rational,
) -> Result<PlHomeo> {
    if signs.is_empty() {
        return Ok(f.clone());
    }
    let on_window = f.as_fn().restrict(u, v)?;
    if on_window.points().iter().any(|(x, y)| x != y) {
        return Err(Error::Precondition(format!("map is not the identity on [{u}, {v}]")));
    }
    let n = Rational::from(signs.len() as u64);
    let width = (v - u) / &n;
    let height = (&width / Rational::from_int(4)).min(tol / Rational::from_int(2));
    let mut middle = vec![(u.clone(), u.clone())];
    for (j, s) in signs.iter().enumerate() {
        let a = u + &width * Rational::from(j as u64);
        let mid = &a + &width / Rational::from_int(2);
        let b = &a + &width;
        let peak = match s {
            Sign::Positive => &mid + &height,
            Sign::Negative => &mid - &height,
        };
        middle.push((mid, peak));
        middle.push((b.clone(), b));
    }
    Ok(splice(f, middle))
}

/// Finds positions of `small` inside `big` as a subsequence (greedy, earliest).
fn embed(small: &[Sign], big: &[Sign]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(small.len());
    let mut j = 0;
    for s in small {
        while j < big.len() && big[j] != *s {
            j += 1;
        }
        if j == big.len() {
            return None;
        }
        out.push(j);
        j += 1;
    }
    Some(out)
}

/// A map within `tol` of `f` whose signature is exactly `target`, obtained by
/// planting extra components in the gaps of `f`. Returns `None` when the
/// signature of `f` is not a subsequence of `target`.
pub fn refine_to_signature(
    f: &PlHomeo,
    target: &FixedSignature,
    tol: &Rational,
) -> Result<Option<PlHomeo>> {
    let layout = Layout::of(f);
    let own = layout.signature();
    let Some(pos) = embed(own.signs(), target.signs()) else {
        return Ok(None);
    };
    let k = own.len();
    let half = tol / Rational::from_int(2);
    let mut extras: Vec<&[Sign]> = Vec::with_capacity(k + 1);
    let mut start = 0;
    for end in pos.iter().copied().chain([target.len()]) {
        extras.push(&target.signs()[start..end]);
        start = end + 1;
    }
    let mut g = f.clone();
    let mut windows = Vec::new();
    for (i, ex) in extras.iter().enumerate() {
        if !ex.is_empty() {
            let (g2, u, v) = open_gap(&g, i, &half);
            g = g2;
            windows.push((u, v, *ex));
        }
    }
    for (u, v, ex) in windows {
        g = insert_bumps(&g, &u, &v, ex, &half)?;
    }
    debug_assert_eq!(&Layout::of(&g).signature(), target);
    Ok(Some(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::signature::signature;
    use crate::rational::q;

    fn two_comp() -> PlHomeo {
        // + on (0,1/2), - on (1/2,1), isolated fixed point at 1/2
        PlHomeo::from_pairs(&[((0, 1), (0, 1)), ((1, 4), (3, 8)), ((1, 2), (1, 2)), ((3, 4), (5, 8)), ((1, 1), (1, 1))])
            .unwrap()
    }

    #[test]
    fn open_then_close_gap() {
        let f = two_comp();
        let tol = q(1, 100);
        let (g, u, v) = open_gap(&f, 1, &tol);
        assert!(u < v);
        assert!(u < q(1, 2) && q(1, 2) < v);
        assert_eq!(signature(&g), signature(&f));
        assert!(Layout::of(&g).gap_is_interval(1));
        assert!(g.sup_dist(&f).0 < tol);

        let h = close_gap(&g, 1, &tol).unwrap();
        assert!(!Layout::of(&h).gap_is_interval(1));
        assert_eq!(signature(&h), signature(&f));
        assert!(h.sup_dist(&g).0 < tol);
    }

    #[test]
    fn open_outer_gaps() {
        let f = two_comp();
        let tol = q(1, 50);
        let (g, u, v) = open_gap(&f, 0, &tol);
        assert_eq!(u, q(0, 1));
        assert!(v > q(0, 1));
        let (g, u, v) = open_gap(&g, 2, &tol);
        assert_eq!(v, q(1, 1));
        assert!(u < q(1, 1));
        let layout = Layout::of(&g);
        assert!(layout.gap_is_interval(0) && layout.gap_is_interval(2));
        assert!(g.sup_dist(&f).0 < tol);
        let back = close_gap(&close_gap(&g, 0, &tol).unwrap(), 2, &tol).unwrap();
        let layout = Layout::of(&back);
        assert!(!layout.gap_is_interval(0) && !layout.gap_is_interval(2));
    }

    #[test]
    fn refine_plants_components() {
        let f = two_comp();
        let target: FixedSignature = "-+-+-+".parse().unwrap();
        let tol = q(1, 64);
        let g = refine_to_signature(&f, &target, &tol).unwrap().unwrap();
        assert_eq!(signature(&g), target);
        assert!(g.sup_dist(&f).0 < tol);

        let too_short: FixedSignature = "+".parse().unwrap();
        assert!(refine_to_signature(&f, &too_short, &tol).unwrap().is_none());
    }

    #[test]
    fn refine_identity() {
        let target: FixedSignature = "+-+".parse().unwrap();
        let g = refine_to_signature(&PlHomeo::identity(), &target, &q(1, 10))
            .unwrap()
            .unwrap();
        assert_eq!(signature(&g), target);
        assert!(g.sup_dist(&PlHomeo::identity()).0 < q(1, 10));
    }
}
