//! Seeded stand-ins for generic homeomorphisms.
//!
//! A generic element has a dense marked order of non-fixed intervals, which
//! no PL map can have. The finite stand-in is a PL map with `k` non-fixed
//! intervals, separated by isolated fixed points, whose signs follow a
//! requested pattern (alternating by default) and whose lengths are random.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::PlHomeo;
use crate::pl::{PlFn, Point};
use crate::rational::Rational;

use super::signature::{FixedSignature, Sign};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignPattern {
    /// `+ − + − …` or `− + − + …`
    Alternating { first: Sign },
    Explicit(FixedSignature),
}

impl Default for SignPattern {
    fn default() -> Self {
        SignPattern::Alternating { first: Sign::Positive }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoGenericSpec {
    pub k: usize,
    #[serde(default)]
    pub signs: SignPattern,
    pub seed: u64,
}

impl PseudoGenericSpec {
    pub fn alternating(k: usize, seed: u64) -> Self {
        PseudoGenericSpec {
            k,
            signs: SignPattern::default(),
            seed,
        }
    }

    /// The signature the generated map will have.
    pub fn target(&self) -> Result<FixedSignature> {
        match &self.signs {
            SignPattern::Alternating { first } => Ok(FixedSignature(
                (0..self.k)
                    .map(|i| if i % 2 == 0 { *first } else { first.flip() })
                    .collect(),
            )),
            SignPattern::Explicit(s) if s.len() == self.k => Ok(s.clone()),
            SignPattern::Explicit(s) => Err(Error::LengthMismatch(self.k, s.len())),
        }
    }
}

/// Random rational in `(0, 1)` with denominator `den`.
fn unit(rng: &mut ChaCha8Rng, den: i64) -> Rational {
    Rational::new(rng.gen_range(1..den), den)
}

/// Breakpoints of one bump on `(lo, hi)` with the given sign, excluding the
/// endpoints. Interior abscissae `x_1 < … < x_r`; a positive bump sends `x_j`
/// to `x_j + s·(x_{j+1} − x_j)`, a negative one to `x_j − s·(x_j − x_{j−1})`,
/// which keeps the values increasing and on the right side of the diagonal.
pub(crate) fn bump(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, sign: Sign) -> Vec<Point> {
    let r = rng.gen_range(1..=3usize);
    let mut ts: Vec<i64> = Vec::with_capacity(r);
    while ts.len() < r {
        let t = rng.gen_range(1..64i64);
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    ts.sort_unstable();
    let width = hi - lo;
    let mut xs = vec![lo.clone()];
    xs.extend(ts.iter().map(|t| lo + &width * Rational::new(*t, 64)));
    xs.push(hi.clone());
    let s = unit(rng, 8);
    (1..=r)
        .map(|j| {
            let y = match sign {
                Sign::Positive => &xs[j] + &s * (&xs[j + 1] - &xs[j]),
                Sign::Negative => &xs[j] - &s * (&xs[j] - &xs[j - 1]),
            };
            (xs[j].clone(), y)
        })
        .collect()
}

pub fn pseudo_generic(spec: &PseudoGenericSpec) -> Result<PlHomeo> {
    if spec.k == 0 {
        return Err(Error::Precondition("pseudo-generic maps need k ≥ 1".into()));
    }
    let target = spec.target()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let weights: Vec<u64> = (0..spec.k).map(|_| rng.gen_range(1..=8u64)).collect();
    let total = Rational::from(weights.iter().sum::<u64>());
    let mut cuts = vec![Rational::zero()];
    let mut acc = 0u64;
    for w in &weights {
        acc += w;
        cuts.push(Rational::from(acc) / &total);
    }
    let mut pts: Vec<Point> = vec![(Rational::zero(), Rational::zero())];
    for (i, sign) in target.signs().iter().enumerate() {
        pts.extend(bump(&mut rng, &cuts[i], &cuts[i + 1], *sign));
        pts.push((cuts[i + 1].clone(), cuts[i + 1].clone()));
    }
    PlHomeo::from_fn(PlFn::new(pts)?)
}
