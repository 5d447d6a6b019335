//! Truncated points of the inverse limit and the metric `d_K`.
//!
//! A point `(x_0, …, x_N)` with `x_{m−1} = T_{p_m}(x_m)` stands for every
//! point of `K` that extends it. Distances are reported as certified
//! intervals: the partial sum through `N` below, plus the tail bound above.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tent::tent_value;

use super::primes::PrimeSequence;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncatedKnasterPoint {
    coords: Vec<Rational>,
}

impl TruncatedKnasterPoint {
    /// Checks range and coherence `x_{m−1} = T_{p_m}(x_m)`.
    pub fn new(coords: Vec<Rational>, primes: &PrimeSequence) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Precondition("a point needs at least x_0".into()));
        }
        if let Some(x) = coords.iter().find(|x| !x.in_unit_interval()) {
            return Err(Error::Precondition(format!("coordinate {x} outside [0,1]")));
        }
        let p = TruncatedKnasterPoint { coords };
        if let Some(m) = p.incoherence(primes) {
            return Err(Error::Precondition(format!(
                "incoherent at coordinate {m}: x_{} ≠ T_{}(x_{m})",
                m - 1,
                primes.prime(m)
            )));
        }
        Ok(p)
    }

    /// First `m` with `x_{m−1} ≠ T_{p_m}(x_m)`, if any.
    pub fn incoherence(&self, primes: &PrimeSequence) -> Option<usize> {
        (1..self.coords.len())
            .find(|&m| self.coords[m - 1] != tent_value(primes.prime(m), &self.coords[m]))
    }

    pub fn is_coherent(&self, primes: &PrimeSequence) -> bool {
        self.incoherence(primes).is_none()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Top coordinate index `N`.
    pub fn top(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    /// The first `n + 1` coordinates.
    pub fn truncate(&self, n: usize) -> Result<TruncatedKnasterPoint> {
        if n > self.top() {
            return Err(Error::TruncationTooShort { need: n, have: self.top() });
        }
        Ok(TruncatedKnasterPoint { coords: self.coords[..=n].to_vec() })
    }
}

/// `(x_0, …, x_N)` from `x_N`, computing `x_{m−1} = T_{p_m}(x_m)` downward.
pub fn extend_point(x_top: &Rational, n: usize, primes: &PrimeSequence) -> Result<TruncatedKnasterPoint> {
    if !x_top.in_unit_interval() {
        return Err(Error::Precondition(format!("coordinate {x_top} outside [0,1]")));
    }
    let mut coords = vec![x_top.clone(); n + 1];
    for m in (1..=n).rev() {
        coords[m - 1] = tent_value(primes.prime(m), &coords[m]);
    }
    Ok(TruncatedKnasterPoint { coords })
}

/// `lower ≤ d ≤ upper`, `upper − lower` at most the tail bound at `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedDistance {
    pub lower: Rational,
    pub upper: Rational,
    #[serde(rename = "N")]
    pub n: usize,
    pub witness: TruncatedKnasterPoint,
}

/// Partial sum `|x_0 − y_0|/2 + Σ_{i=1}^{N} w(i)|x_i − y_i|`.
pub fn partial_sum(x: &TruncatedKnasterPoint, y: &TruncatedKnasterPoint, primes: &PrimeSequence) -> Rational {
    x.coords
        .iter()
        .zip(&y.coords)
        .enumerate()
        .map(|(i, (a, b))| primes.coeff(i) * (a - b).abs())
        .sum()
}

pub fn knaster_dist(
    x: &TruncatedKnasterPoint,
    y: &TruncatedKnasterPoint,
    primes: &PrimeSequence,
) -> Result<CertifiedDistance> {
    if x.coords.len() != y.coords.len() {
        return Err(Error::LengthMismatch(x.coords.len(), y.coords.len()));
    }
    let lower = partial_sum(x, y, primes);
    let upper = &lower + primes.tail_bound(x.top());
    Ok(CertifiedDistance {
        lower,
        upper,
        n: x.top(),
        witness: x.clone(),
    })
}
