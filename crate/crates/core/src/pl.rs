//! Continuous piecewise-linear functions on a closed interval with exact
//! rational breakpoints.
//!
//! [`PlFn`] is the unconstrained carrier: the domain is any `[lo, hi]` with
//! `lo < hi` and values are arbitrary rationals. The unit-interval map types
//! in [`crate::map`] wrap it and add their own invariants.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A breakpoint `(x, y)`.
pub type Point = (Rational, Rational);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlFn {
    pts: Vec<Point>,
}

impl std::fmt::Debug for PlFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("PlFn[")?;
        for (i, (x, y)) in self.pts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        f.write_str("]")
    }
}

fn collinear(a: &Point, b: &Point, c: &Point) -> bool {
    (&b.1 - &a.1) * (&c.0 - &b.0) == (&c.1 - &b.1) * (&b.0 - &a.0)
}

/// Value at `x` of the segment through `a` and `b`.
pub(crate) fn lerp(a: &Point, b: &Point, x: &Rational) -> Rational {
    if x == &a.0 {
        return a.1.clone();
    }
    if x == &b.0 {
        return b.1.clone();
    }
    &a.1 + (&b.1 - &a.1) * (x - &a.0) / (&b.0 - &a.0)
}

/// The `x` at which the segment through `a` and `b` takes value `y`.
/// Requires `a.1 != b.1`.
pub(crate) fn inverse_lerp(a: &Point, b: &Point, y: &Rational) -> Rational {
    if y == &a.1 {
        return a.0.clone();
    }
    if y == &b.1 {
        return b.0.clone();
    }
    &a.0 + (&b.0 - &a.0) * (y - &a.1) / (&b.1 - &a.1)
}

/// Root of the line through `(x0, d0)`, `(x1, d1)` when `d0` and `d1` have
/// strictly opposite signs.
fn crossing(x0: &Rational, d0: &Rational, x1: &Rational, d1: &Rational) -> Rational {
    x0 + (x1 - x0) * d0 / (d0 - d1)
}

/// Sorted, deduplicated union of two sorted lists.
fn merge_sorted(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => match x.cmp(y) {
                Ordering::Less => {
                    i += 1;
                    x
                }
                Ordering::Greater => {
                    j += 1;
                    y
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    x
                }
            },
            (Some(x), None) => {
                i += 1;
                x
            }
            (None, Some(y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if out.last() != Some(next) {
            out.push(next.clone());
        }
    }
    out
}

impl PlFn {
    /// Validates that x-coordinates are strictly increasing and that there are
    /// at least two points, then canonicalizes.
    pub fn new(pts: Vec<Point>) -> Result<Self> {
        if pts.len() < 2 {
            return Err(Error::InvalidMap("need at least two breakpoints".into()));
        }
        for w in pts.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidMap(format!(
                    "x-coordinates must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(Self::from_sorted(pts))
    }

    /// Caller guarantees strictly increasing x and at least two points.
    pub(crate) fn from_sorted(pts: Vec<Point>) -> Self {
        debug_assert!(pts.len() >= 2);
        debug_assert!(pts.windows(2).all(|w| w[0].0 < w[1].0));
        let mut f = PlFn { pts };
        f.canonicalize();
        f
    }

    /// Builds from `(x, y)` pairs that may contain duplicate x-values with
    /// equal y (as produced by concatenating pieces).
    pub(crate) fn from_pieces(mut pts: Vec<Point>) -> Self {
        pts.dedup_by(|b, a| a.0 == b.0);
        Self::from_sorted(pts)
    }

    pub fn affine(lo: Rational, hi: Rational, y_lo: Rational, y_hi: Rational) -> Self {
        Self::from_sorted(vec![(lo, y_lo), (hi, y_hi)])
    }

    pub fn constant(lo: Rational, hi: Rational, c: Rational) -> Self {
        Self::from_sorted(vec![(lo, c.clone()), (hi, c)])
    }

    fn canonicalize(&mut self) {
        if self.pts.len() <= 2 {
            return;
        }
        let mut out: Vec<Point> = Vec::with_capacity(self.pts.len());
        for p in self.pts.drain(..) {
            while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
                out.pop();
            }
            out.push(p);
        }
        self.pts = out;
    }

    pub fn points(&self) -> &[Point] {
        &self.pts
    }

    pub fn into_points(self) -> Vec<Point> {
        self.pts
    }

    pub fn xs(&self) -> Vec<Rational> {
        self.pts.iter().map(|p| p.0.clone()).collect()
    }

    pub fn lo(&self) -> &Rational {
        &self.pts[0].0
    }

    pub fn hi(&self) -> &Rational {
        &self.pts[self.pts.len() - 1].0
    }

    pub fn first_value(&self) -> &Rational {
        &self.pts[0].1
    }

    pub fn last_value(&self) -> &Rational {
        &self.pts[self.pts.len() - 1].1
    }

    pub fn num_segments(&self) -> usize {
        self.pts.len() - 1
    }

    /// Index `i` of the segment `[x_i, x_{i+1}]` containing `x`
    /// (the left one at an interior breakpoint).
    fn segment_of(&self, x: &Rational) -> usize {
        let idx = self.pts.partition_point(|p| &p.0 < x);
        idx.saturating_sub(1).min(self.pts.len() - 2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo() <= x && x <= self.hi()
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if !self.contains(x) {
            return Err(Error::Domain {
                x: Box::new(x.clone()),
                lo: Box::new(self.lo().clone()),
                hi: Box::new(self.hi().clone()),
            });
        }
        Ok(self.eval_in(x))
    }

    /// Evaluation without the domain check; `x` must lie in the domain.
    pub(crate) fn eval_in(&self, x: &Rational) -> Rational {
        let idx = self.pts.partition_point(|p| &p.0 < x);
        if let Some(p) = self.pts.get(idx).filter(|p| &p.0 == x) {
            return p.1.clone();
        }
        let i = self.segment_of(x);
        lerp(&self.pts[i], &self.pts[i + 1], x)
    }

    pub fn slope(&self, segment: usize) -> Rational {
        let (a, b) = (&self.pts[segment], &self.pts[segment + 1]);
        (&b.1 - &a.1) / (&b.0 - &a.0)
    }

    pub fn slopes(&self) -> Vec<Rational> {
        (0..self.num_segments()).map(|i| self.slope(i)).collect()
    }

    pub fn min_value(&self) -> Rational {
        self.pts.iter().map(|p| &p.1).min().unwrap().clone()
    }

    pub fn max_value(&self) -> Rational {
        self.pts.iter().map(|p| &p.1).max().unwrap().clone()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.pts.windows(2).all(|w| w[0].1 < w[1].1)
    }

    /// Maximum value and the smallest x attaining it.
    pub fn argmax(&self) -> (Rational, Rational) {
        let mut best = &self.pts[0];
        for p in &self.pts[1..] {
            if p.1 > best.1 {
                best = p;
            }
        }
        (best.1.clone(), best.0.clone())
    }

    /// `outer ∘ self`. The range of `self` must lie inside the domain of
    /// `outer`. The result lives on the domain of `self`.
    pub fn then(&self, outer: &PlFn) -> Result<PlFn> {
        let (lo, hi) = (self.min_value(), self.max_value());
        if !(outer.contains(&lo) && outer.contains(&hi)) {
            return Err(Error::InvalidMap(format!(
                "range [{lo}, {hi}] of inner map escapes outer domain [{}, {}]",
                outer.lo(),
                outer.hi()
            )));
        }
        let mut pts: Vec<Point> = Vec::with_capacity(self.pts.len() + outer.pts.len());
        for w in self.pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            pts.push((a.0.clone(), outer.eval_in(&a.1)));
            if a.1 == b.1 {
                continue;
            }
            let (ylo, yhi) = if a.1 < b.1 { (&a.1, &b.1) } else { (&b.1, &a.1) };
            let start = outer.pts.partition_point(|p| &p.0 <= ylo);
            let end = outer.pts.partition_point(|p| &p.0 < yhi);
            let inner: Vec<&Point> = outer.pts[start..end].iter().collect();
            let mut xs: Vec<Point> = inner
                .iter()
                .map(|p| (inverse_lerp(a, b, &p.0), p.1.clone()))
                .collect();
            if a.1 > b.1 {
                xs.reverse();
            }
            pts.extend(xs);
        }
        let last = self.pts.last().unwrap();
        pts.push((last.0.clone(), outer.eval_in(&last.1)));
        Ok(PlFn::from_sorted(pts))
    }

    /// Pointwise combination `op(self(x), other(x))` for an operation that is
    /// affine in each argument jointly (sums, differences, scalings), so that
    /// the merged breakpoint set suffices. Domains must agree.
    pub fn zip_affine<F>(&self, other: &PlFn, op: F) -> Result<PlFn>
    where
        F: Fn(&Rational, &Rational) -> Rational,
    {
        self.check_same_domain(other)?;
        let xs = merge_sorted(&self.xs(), &other.xs());
        let pts = xs
            .into_iter()
            .map(|x| {
                let v = op(&self.eval_in(&x), &other.eval_in(&x));
                (x, v)
            })
            .collect();
        Ok(PlFn::from_sorted(pts))
    }

    fn check_same_domain(&self, other: &PlFn) -> Result<()> {
        if self.lo() != other.lo() || self.hi() != other.hi() {
            return Err(Error::InvalidMap(format!(
                "domains differ: [{}, {}] vs [{}, {}]",
                self.lo(),
                self.hi(),
                other.lo(),
                other.hi()
            )));
        }
        Ok(())
    }

    /// `max |self − other|` with its leftmost maximiser. Both functions are
    /// affine between merged breakpoints, so the maximum sits on one of them.
    pub fn max_abs_diff(&self, other: &PlFn) -> Result<(Rational, Rational)> {
        self.check_same_domain(other)?;
        let mut best: Option<(Rational, Rational)> = None;
        for x in merge_sorted(&self.xs(), &other.xs()) {
            let v = (self.eval_in(&x) - other.eval_in(&x)).abs();
            if best.as_ref().is_none_or(|b| v > b.0) {
                best = Some((v, x));
            }
        }
        Ok(best.expect("at least two breakpoints"))
    }

    pub fn sub(&self, other: &PlFn) -> Result<PlFn> {
        self.zip_affine(other, |a, b| a - b)
    }

    pub fn add(&self, other: &PlFn) -> Result<PlFn> {
        self.zip_affine(other, |a, b| a + b)
    }

    pub fn scale(&self, c: &Rational) -> PlFn {
        PlFn::from_sorted(self.pts.iter().map(|(x, y)| (x.clone(), y * c)).collect())
    }

    /// `(1 - t)·self + t·other`.
    pub fn convex(&self, other: &PlFn, t: &Rational) -> Result<PlFn> {
        let s = Rational::one() - t;
        self.zip_affine(other, |a, b| &s * a + t * b)
    }

    /// Inserts the strict zero crossings of each segment as breakpoints.
    pub fn with_zero_crossings(&self) -> PlFn {
        let mut pts = Vec::with_capacity(self.pts.len() * 2);
        for w in self.pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            pts.push(a.clone());
            if a.1.signum() * b.1.signum() < 0 {
                pts.push((crossing(&a.0, &a.1, &b.0, &b.1), Rational::zero()));
            }
        }
        pts.push(self.pts.last().unwrap().clone());
        PlFn { pts }
    }

    pub fn abs(&self) -> PlFn {
        let with = self.with_zero_crossings();
        PlFn::from_sorted(with.pts.into_iter().map(|(x, y)| (x, y.abs())).collect())
    }

    /// Restriction to `[lo, hi]`, which must lie in the domain with `lo < hi`.
    pub fn restrict(&self, lo: &Rational, hi: &Rational) -> Result<PlFn> {
        if !(self.contains(lo) && self.contains(hi) && lo < hi) {
            return Err(Error::InvalidMap(format!(
                "cannot restrict to [{lo}, {hi}] inside [{}, {}]",
                self.lo(),
                self.hi()
            )));
        }
        let mut pts = vec![(lo.clone(), self.eval_in(lo))];
        pts.extend(
            self.pts
                .iter()
                .filter(|p| &p.0 > lo && &p.0 < hi)
                .cloned(),
        );
        pts.push((hi.clone(), self.eval_in(hi)));
        Ok(PlFn::from_sorted(pts))
    }

    /// Inverse of a strictly monotone function, defined on its range.
    pub fn inverse(&self) -> Result<PlFn> {
        let inc = self.is_strictly_increasing();
        let dec = self.pts.windows(2).all(|w| w[0].1 > w[1].1);
        let mut pts: Vec<Point> = self.pts.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        if dec {
            pts.reverse();
        } else if !inc {
            return Err(Error::InvalidMap("inverse of a non-monotone function".into()));
        }
        Ok(PlFn { pts })
    }

    /// All `x` with `self(x) = y`. A segment lying flat at height `y`
    /// contributes its two endpoints.
    pub fn preimages(&self, y: &Rational) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        let mut push = |x: Rational| {
            if out.last() != Some(&x) {
                out.push(x);
            }
        };
        for w in self.pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if &a.1 == y {
                push(a.0.clone());
            }
            if (&a.1 < y && y < &b.1) || (&b.1 < y && y < &a.1) {
                push(inverse_lerp(a, b, y));
            }
            if a.1 == b.1 && &a.1 == y {
                push(b.0.clone());
            }
        }
        let last = self.pts.last().unwrap();
        if &last.1 == y {
            push(last.0.clone());
        }
        out
    }

    /// Pointwise minimum of two functions on the same domain.
    pub fn pointwise_min(&self, other: &PlFn) -> Result<PlFn> {
        self.pointwise_select(other, true)
    }

    /// Pointwise maximum of two functions on the same domain.
    pub fn pointwise_max(&self, other: &PlFn) -> Result<PlFn> {
        self.pointwise_select(other, false)
    }

    fn pointwise_select(&self, other: &PlFn, take_min: bool) -> Result<PlFn> {
        let diff = self.sub(other)?.with_zero_crossings();
        let xs = merge_sorted(&diff.xs(), &merge_sorted(&self.xs(), &other.xs()));
        let pts = xs
            .into_iter()
            .map(|x| {
                let (a, b) = (self.eval_in(&x), other.eval_in(&x));
                let v = if (a <= b) == take_min { a } else { b };
                (x, v)
            })
            .collect();
        Ok(PlFn::from_sorted(pts))
    }

    /// Affine change of coordinates: `x ↦ x·sx + tx`, `y ↦ y·sy + ty`.
    /// `sx` must be positive.
    pub(crate) fn rescale(&self, sx: &Rational, tx: &Rational, sy: &Rational, ty: &Rational) -> PlFn {
        debug_assert!(sx.is_positive());
        PlFn {
            pts: self
                .pts
                .iter()
                .map(|(x, y)| (x * sx + tx, y * sy + ty))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn f(pts: &[(i64, i64, i64, i64)]) -> PlFn {
        PlFn::new(pts.iter().map(|&(a, b, c, d)| (q(a, b), q(c, d))).collect()).unwrap()
    }

    #[test]
    fn canonical_drops_collinear_points() {
        let g = f(&[(0, 1, 0, 1), (1, 4, 1, 4), (1, 2, 1, 2), (1, 1, 1, 1)]);
        assert_eq!(g.points().len(), 2);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(PlFn::new(vec![(q(1, 2), q(0, 1)), (q(1, 4), q(1, 1))]).is_err());
        assert!(PlFn::new(vec![(q(0, 1), q(0, 1))]).is_err());
    }

    #[test]
    fn eval_interpolates() {
        let g = f(&[(0, 1, 0, 1), (1, 2, 3, 4), (1, 1, 1, 1)]);
        assert_eq!(g.eval(&q(1, 4)).unwrap(), q(3, 8));
        assert_eq!(g.eval(&q(1, 2)).unwrap(), q(3, 4));
        assert!(g.eval(&q(3, 2)).is_err());
    }

    #[test]
    fn abs_and_crossings() {
        let g = f(&[(0, 1, -1, 1), (1, 1, 1, 1)]);
        let a = g.abs();
        assert_eq!(a.points().len(), 3);
        assert_eq!(a.eval(&q(1, 2)).unwrap(), q(0, 1));
        assert_eq!(a.argmax().0, q(1, 1));
    }

    #[test]
    fn preimages_cover_all_laps() {
        let tent = f(&[(0, 1, 0, 1), (1, 2, 1, 1), (1, 1, 0, 1)]);
        assert_eq!(tent.preimages(&q(1, 2)), vec![q(1, 4), q(3, 4)]);
        assert_eq!(tent.preimages(&q(1, 1)), vec![q(1, 2)]);
        assert_eq!(tent.preimages(&q(0, 1)), vec![q(0, 1), q(1, 1)]);
    }

    #[test]
    fn pointwise_min_inserts_crossing() {
        let a = f(&[(0, 1, 0, 1), (1, 1, 1, 1)]);
        let b = f(&[(0, 1, 1, 2), (1, 1, 1, 2)]);
        let m = a.pointwise_min(&b).unwrap();
        assert_eq!(m.points().len(), 3);
        assert_eq!(m.eval(&q(3, 4)).unwrap(), q(1, 2));
        assert_eq!(m.eval(&q(1, 4)).unwrap(), q(1, 4));
    }
}
