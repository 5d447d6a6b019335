//! Fixed-point signatures of PL homeomorphisms.
//!
//! The complement of `fix(f)` is a finite union of open intervals for PL `f`.
//! Listing them left to right, each marked `+` where `f(x) > x` and `-` where
//! `f(x) < x`, gives the marked linear order that classifies `f` up to
//! conjugacy. Fixed intervals of positive length carry no entry.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::map::PlHomeo;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }

    fn of(r: &Rational) -> Option<Sign> {
        match r.signum() {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(if *self == Sign::Positive { "+" } else { "-" })
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "+" | "+1" => Ok(Sign::Positive),
            "-" | "-1" => Ok(Sign::Negative),
            other => Err(serde::de::Error::custom(format!("bad sign {other:?}"))),
        }
    }
}

/// Ordered list of signs, one per maximal non-fixed interval.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FixedSignature(pub Vec<Sign>);

impl FixedSignature {
    pub fn new(signs: Vec<Sign>) -> Self {
        FixedSignature(signs)
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FixedSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for FixedSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Positive),
                '-' => Ok(Sign::Negative),
                _ => Err(Error::Parse(format!("bad sign character {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(FixedSignature)
    }
}

impl Serialize for FixedSignature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FixedSignature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// One maximal open interval `(lo, hi)` of non-fixed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub lo: Rational,
    pub hi: Rational,
    pub sign: Sign,
}

/// Non-fixed components of a homeomorphism, left to right. Between them (and
/// before the first / after the last) lie the gaps: closed pieces of
/// `fix(f)`, each either a single point or a fixed interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub components: Vec<Component>,
}

impl Layout {
    pub fn of(f: &PlHomeo) -> Layout {
        let disp = f.displacement().with_zero_crossings();
        let pts = disp.points();
        let mut components = Vec::new();
        let mut open: Option<(Rational, Sign)> = None;
        for w in pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            // no strict crossing inside a segment, so the interior sign is the
            // sign of whichever endpoint is nonzero
            let interior = Sign::of(&a.1).or_else(|| Sign::of(&b.1));
            if let Some(s) = interior {
                if open.is_none() {
                    open = Some((a.0.clone(), s));
                }
                if b.1.is_zero() {
                    let (lo, sign) = open.take().unwrap();
                    components.push(Component { lo, hi: b.0.clone(), sign });
                }
            }
        }
        debug_assert!(open.is_none(), "homeomorphisms fix 1");
        Layout { components }
    }

    pub fn num_gaps(&self) -> usize {
        self.components.len() + 1
    }

    /// Gap `i` as a closed interval `[lo, hi]` (possibly a single point).
    /// Gap `0` contains `0`, gap `k` contains `1`.
    pub fn gap(&self, i: usize) -> (Rational, Rational) {
        let k = self.components.len();
        let lo = if i == 0 {
            Rational::zero()
        } else {
            self.components[i - 1].hi.clone()
        };
        let hi = if i == k {
            Rational::one()
        } else {
            self.components[i].lo.clone()
        };
        (lo, hi)
    }

    pub fn gap_is_interval(&self, i: usize) -> bool {
        let (lo, hi) = self.gap(i);
        lo < hi
    }

    pub fn signature(&self) -> FixedSignature {
        FixedSignature(self.components.iter().map(|c| c.sign).collect())
    }

    /// The component containing `x`, if `x` is not fixed.
    pub fn component_containing(&self, x: &Rational) -> Option<&Component> {
        self.components.iter().find(|c| &c.lo < x && x < &c.hi)
    }
}

pub fn signature(f: &PlHomeo) -> FixedSignature {
    Layout::of(f).signature()
}

/// Signature of `f̃`: reverse the order and flip every sign.
pub fn signature_reflect(s: &FixedSignature) -> FixedSignature {
    FixedSignature(s.0.iter().rev().map(|s| s.flip()).collect())
}

/// Signature of `⊕ᵈ(f)`: `d` blocks alternating `s` and its reflection.
pub fn signature_oplus(s: &FixedSignature, d: u64) -> FixedSignature {
    let r = signature_reflect(s);
    let mut out = Vec::with_capacity(s.len() * d as usize);
    for i in 0..d {
        out.extend_from_slice(if i % 2 == 0 { &s.0 } else { &r.0 });
    }
    FixedSignature(out)
}

/// Conjugacy in `Homeo₊[0,1]` up to the fixed-interval convention: for
/// finitely many components, an order- and marking-preserving bijection
/// exists iff the sign lists are equal.
pub fn decide_conjugate(f: &PlHomeo, g: &PlHomeo) -> bool {
    signature(f) == signature(g)
}
