//! Prime sequences `p_1, p_2, …` defining the inverse limit.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `2, 2,3, 2,3,5, 2,3,5,7, …`: block `b` lists the first `b` primes, so
/// every prime recurs infinitely often.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum PrimeSequence {
    #[default]
    Diagonal,
    /// Constant `2`. Fast, but not universal.
    All2,
    /// An explicit list, repeated cyclically.
    Explicit(Vec<u64>),
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

fn nth_prime(k: usize) -> u64 {
    (2..).filter(|&n| is_prime(n)).nth(k).expect("primes are infinite")
}

impl PrimeSequence {
    pub fn explicit(list: Vec<u64>) -> Result<Self> {
        if list.is_empty() {
            return Err(Error::Parse("explicit prime list is empty".into()));
        }
        if let Some(bad) = list.iter().find(|p| !is_prime(**p)) {
            return Err(Error::Parse(format!("{bad} is not prime")));
        }
        Ok(PrimeSequence::Explicit(list))
    }

    /// `p_i` for `i ≥ 1`.
    pub fn prime(&self, i: usize) -> u64 {
        assert!(i >= 1, "primes are indexed from 1");
        match self {
            PrimeSequence::All2 => 2,
            PrimeSequence::Explicit(list) => list[(i - 1) % list.len()],
            PrimeSequence::Diagonal => {
                let (mut pos, mut block) = (i - 1, 1);
                while pos >= block {
                    pos -= block;
                    block += 1;
                }
                nth_prime(pos)
            }
        }
    }

    /// `p_1, …, p_n`.
    pub fn prefix(&self, n: usize) -> Vec<u64> {
        (1..=n).map(|i| self.prime(i)).collect()
    }

    /// `p_{lo} ⋯ p_{hi}` (empty product `1` when `lo > hi`).
    pub fn span(&self, lo: usize, hi: usize) -> u64 {
        (lo.max(1)..=hi).fold(1u64, |acc, i| {
            acc.checked_mul(self.prime(i)).expect("prime product fits in u64")
        })
    }

    /// `w(i) = 1/(p_1 ⋯ p_i)`, with `w(0) = 1`.
    pub fn weight(&self, i: usize) -> Rational {
        Rational::from(self.span(1, i)).recip()
    }

    /// Coefficient of `|x_i − y_i|` in the metric: `1/2` for `i = 0`, else `w(i)`.
    pub fn coeff(&self, i: usize) -> Rational {
        if i == 0 {
            Rational::new(1, 2)
        } else {
            self.weight(i)
        }
    }

    /// Closed-form bound on `Σ_{i>N} w(i)`: every `p ≥ 2`, so the tail is at
    /// most `w(N)·(1/2 + 1/4 + …) = w(N)`. Exact for the all-2 sequence.
    pub fn tail_bound(&self, n: usize) -> Rational {
        self.weight(n)
    }

    /// Smallest `N ≥ from` with `w(N) < bound`.
    pub fn first_below(&self, bound: &Rational, from: usize) -> usize {
        let mut n = from;
        while self.weight(n) >= *bound {
            n += 1;
        }
        n
    }
}

impl fmt::Display for PrimeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSequence::Diagonal => write!(f, "diagonal"),
            PrimeSequence::All2 => write!(f, "all2"),
            PrimeSequence::Explicit(list) => {
                let parts: Vec<String> = list.iter().map(|p| p.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

impl std::str::FromStr for PrimeSequence {
    type Err = Error;

    /// `diagonal`, `all2`, or a comma-separated list such as `2,3,5`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "diagonal" => Ok(PrimeSequence::Diagonal),
            "all2" => Ok(PrimeSequence::All2),
            other => {
                let list = other
                    .trim_matches(|c| c == '[' || c == ']')
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<u64>()
                            .map_err(|_| Error::Parse(format!("bad prime sequence {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                PrimeSequence::explicit(list)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PrimeJson {
    Name(String),
    List(Vec<u64>),
}

impl Serialize for PrimeSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PrimeSequence::Explicit(list) => PrimeJson::List(list.clone()),
            other => PrimeJson::Name(other.to_string()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrimeSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match PrimeJson::deserialize(d)? {
            PrimeJson::Name(name) => name.parse().map_err(serde::de::Error::custom),
            PrimeJson::List(list) => PrimeSequence::explicit(list).map_err(serde::de::Error::custom),
        }
    }
}
