//! Continuous piecewise-linear self-maps of `[0,1]`.
//!
//! * [`PlMap`]: any continuous PL map `[0,1] → [0,1]`.
//! * [`PlHomeo`]: strictly increasing, fixing `0` and `1`.
//! * [`OpenPlMap`]: an open map, i.e. no flat pieces and every turning point
//!   and endpoint value in `{0, 1}`, with image `[0,1]`.
//!
//! All three are stored in canonical form (no breakpoint collinear with its
//! neighbours), so structural equality is map equality.
//!
//! JSON form: `{"breakpoints": [["0/1","0/1"], ["1/2","3/4"], ["1/1","1/1"]]}`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pl::{PlFn, Point};
use crate::rational::Rational;

/// A breakpoint `((p, q), (r, s))` standing for `(p/q, r/s)`.
pub type IntPoint = ((i64, i64), (i64, i64));

#[derive(Serialize, Deserialize)]
struct MapJson {
    breakpoints: Vec<[Rational; 2]>,
}

fn to_json(f: &PlFn) -> MapJson {
    MapJson {
        breakpoints: f
            .points()
            .iter()
            .map(|(x, y)| [x.clone(), y.clone()])
            .collect(),
    }
}

fn from_json(j: MapJson) -> Vec<Point> {
    j.breakpoints.into_iter().map(|[x, y]| (x, y)).collect()
}

/// Continuous PL map of the unit interval into itself.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlMap(PlFn);

impl fmt::Debug for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlMap{:?}", self.0)
    }
}

impl PlMap {
    pub fn new(pts: Vec<Point>) -> Result<Self> {
        Self::from_fn(PlFn::new(pts)?)
    }

    /// Convenience constructor from `(num, den)` pairs: `[((0,1),(0,1)), ...]`.
    pub fn from_pairs(pts: &[IntPoint]) -> Result<Self> {
        Self::new(
            pts.iter()
                .map(|&((a, b), (c, d))| (Rational::new(a, b), Rational::new(c, d)))
                .collect(),
        )
    }

    pub fn from_fn(f: PlFn) -> Result<Self> {
        if !f.lo().is_zero() || !f.hi().is_one() {
            return Err(Error::InvalidMap(format!(
                "domain must be [0,1], got [{}, {}]",
                f.lo(),
                f.hi()
            )));
        }
        if let Some((x, y)) = f.points().iter().find(|(_, y)| !y.in_unit_interval()) {
            return Err(Error::InvalidMap(format!("value {y} at {x} lies outside [0,1]")));
        }
        Ok(PlMap(f))
    }

    pub fn identity() -> Self {
        PlMap(PlFn::affine(
            Rational::zero(),
            Rational::one(),
            Rational::zero(),
            Rational::one(),
        ))
    }

    pub fn as_fn(&self) -> &PlFn {
        &self.0
    }

    pub fn breakpoints(&self) -> &[Point] {
        self.0.points()
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.0.eval(x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PlMap) -> PlMap {
        PlMap(inner.0.then(&self.0).expect("unit-interval maps always compose"))
    }

    /// Exact `sup_x |self(x) − other(x)|` together with the smallest `x`
    /// attaining it. The difference is PL, so the sup sits at a merged
    /// breakpoint.
    pub fn sup_dist(&self, other: &PlMap) -> (Rational, Rational) {
        self.0.max_abs_diff(&other.0).expect("same domain")
    }

    /// `x ↦ 1 − self(1 − x)`.
    pub fn reflect(&self) -> PlMap {
        let one = Rational::one();
        let mut pts: Vec<Point> = self
            .0
            .points()
            .iter()
            .map(|(x, y)| (&one - x, &one - y))
            .collect();
        pts.reverse();
        PlMap(PlFn::from_sorted(pts))
    }

    pub fn is_identity(&self) -> bool {
        *self == PlMap::identity()
    }
}

impl Serialize for PlMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MapJson::deserialize(d)?;
        PlMap::new(from_json(j)).map_err(serde::de::Error::custom)
    }
}

/// Increasing PL homeomorphism of `[0,1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlHomeo(PlMap);

impl fmt::Debug for PlHomeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlHomeo{:?}", self.0.as_fn())
    }
}

impl PlHomeo {
    pub fn new(pts: Vec<Point>) -> Result<Self> {
        Self::from_map(PlMap::new(pts)?)
    }

    pub fn from_pairs(pts: &[IntPoint]) -> Result<Self> {
        Self::from_map(PlMap::from_pairs(pts)?)
    }

    pub fn from_map(m: PlMap) -> Result<Self> {
        let f = m.as_fn();
        if !f.first_value().is_zero() || !f.last_value().is_one() {
            return Err(Error::NotHomeo(format!(
                "must fix 0 and 1, got f(0)={} f(1)={}",
                f.first_value(),
                f.last_value()
            )));
        }
        if !f.is_strictly_increasing() {
            return Err(Error::NotHomeo("values must be strictly increasing".into()));
        }
        Ok(PlHomeo(m))
    }

    pub(crate) fn from_fn_unchecked(f: PlFn) -> Self {
        debug_assert!(f.lo().is_zero() && f.hi().is_one());
        debug_assert!(f.first_value().is_zero() && f.last_value().is_one());
        debug_assert!(f.is_strictly_increasing());
        PlHomeo(PlMap(f))
    }

    pub fn from_fn(f: PlFn) -> Result<Self> {
        Self::from_map(PlMap::from_fn(f)?)
    }

    pub fn identity() -> Self {
        PlHomeo(PlMap::identity())
    }

    pub fn as_map(&self) -> &PlMap {
        &self.0
    }

    pub fn into_map(self) -> PlMap {
        self.0
    }

    pub fn as_fn(&self) -> &PlFn {
        self.0.as_fn()
    }

    pub fn breakpoints(&self) -> &[Point] {
        self.0.breakpoints()
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.0.eval(x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PlHomeo) -> PlHomeo {
        PlHomeo(self.0.compose(&inner.0))
    }

    pub fn invert(&self) -> PlHomeo {
        PlHomeo(PlMap(self.as_fn().inverse().expect("homeomorphisms are monotone")))
    }

    /// `u⁻¹ ∘ self ∘ u`.
    pub fn conjugate_by(&self, u: &PlHomeo) -> PlHomeo {
        u.invert().compose(&self.compose(u))
    }

    pub fn sup_dist(&self, other: &PlHomeo) -> (Rational, Rational) {
        self.0.sup_dist(&other.0)
    }

    /// `f̃(x) = 1 − f(1 − x)`.
    pub fn reflect(&self) -> PlHomeo {
        PlHomeo(self.0.reflect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    /// Displacement `x ↦ self(x) − x` as a PL function on `[0,1]`.
    pub fn displacement(&self) -> PlFn {
        self.as_fn()
            .sub(PlMap::identity().as_fn())
            .expect("same domain")
    }
}

impl Serialize for PlHomeo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlHomeo {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = PlMap::deserialize(d)?;
        PlHomeo::from_map(m).map_err(serde::de::Error::custom)
    }
}

/// Open PL map of `[0,1]` onto itself.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OpenPlMap(PlMap);

impl fmt::Debug for OpenPlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OpenPlMap{:?}", self.0.as_fn())
    }
}

impl OpenPlMap {
    pub fn new(pts: Vec<Point>) -> Result<Self> {
        Self::from_map(PlMap::new(pts)?)
    }

    pub fn from_pairs(pts: &[IntPoint]) -> Result<Self> {
        Self::from_map(PlMap::from_pairs(pts)?)
    }

    /// Checks openness: no flat segment, every turning point and both
    /// endpoints take a value in `{0, 1}`, and the image is `[0,1]`.
    pub fn from_map(m: PlMap) -> Result<Self> {
        let f = m.as_fn();
        let slopes = f.slopes();
        if slopes.iter().any(Rational::is_zero) {
            return Err(Error::NotOpen("map is constant on a segment".into()));
        }
        let extreme = |y: &Rational| y.is_zero() || y.is_one();
        for (i, w) in slopes.windows(2).enumerate() {
            if w[0].signum() != w[1].signum() {
                let (x, y) = &f.points()[i + 1];
                if !extreme(y) {
                    return Err(Error::NotOpen(format!(
                        "turning point at {x} has value {y} outside {{0,1}}"
                    )));
                }
            }
        }
        for (x, y) in [&f.points()[0], f.points().last().unwrap()] {
            if !extreme(y) {
                return Err(Error::NotOpen(format!("endpoint {x} maps to {y} outside {{0,1}}")));
            }
        }
        if !f.min_value().is_zero() || !f.max_value().is_one() {
            return Err(Error::NotOpen("image is not all of [0,1]".into()));
        }
        Ok(OpenPlMap(m))
    }

    pub fn identity() -> Self {
        OpenPlMap(PlMap::identity())
    }

    pub fn as_map(&self) -> &PlMap {
        &self.0
    }

    pub fn as_fn(&self) -> &PlFn {
        self.0.as_fn()
    }

    pub fn breakpoints(&self) -> &[Point] {
        self.0.breakpoints()
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.0.eval(x)
    }

    /// `f(0)`, always `0` or `1`.
    pub fn value_at_zero(&self) -> &Rational {
        self.as_fn().first_value()
    }

    /// Lap boundaries `0 = a_0 < a_1 < … < a_k = 1`: the turning points of
    /// the map together with the endpoints. Each lap `[a_i, a_{i+1}]` is
    /// mapped monotonically onto `[0,1]`.
    pub fn lap_boundaries(&self) -> Vec<Rational> {
        let f = self.as_fn();
        let slopes = f.slopes();
        let mut out = vec![Rational::zero()];
        for (i, w) in slopes.windows(2).enumerate() {
            if w[0].signum() != w[1].signum() {
                out.push(f.points()[i + 1].0.clone());
            }
        }
        out.push(Rational::one());
        out
    }

    /// Number of maximal monotone laps.
    pub fn degree(&self) -> usize {
        self.lap_boundaries().len() - 1
    }

    /// `self ∘ inner` for an open outer map and any PL inner map.
    pub fn compose(&self, inner: &OpenPlMap) -> OpenPlMap {
        OpenPlMap(self.0.compose(&inner.0))
    }

    /// `self ∘ h`; precomposition with a homeomorphism keeps the map open.
    pub fn compose_homeo(&self, h: &PlHomeo) -> OpenPlMap {
        OpenPlMap(self.0.compose(h.as_map()))
    }
}

impl From<PlHomeo> for OpenPlMap {
    fn from(h: PlHomeo) -> Self {
        OpenPlMap(h.0)
    }
}

impl Serialize for OpenPlMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OpenPlMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = PlMap::deserialize(d)?;
        OpenPlMap::from_map(m).map_err(serde::de::Error::custom)
    }
}
