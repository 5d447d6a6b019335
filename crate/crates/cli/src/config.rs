//! Experiment configuration: everything that determines a campaign.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use knaster_core::knaster::{PrimeSequence, WitnessStrategy};
use knaster_core::Rational;
use serde::{Deserialize, Serialize};

/// Environment variable that overrides the seed of a config file.
pub const SEED_ENV: &str = "KNASTER_LAB_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Semiconj,
    OplusScaling,
    GridFix,
    ModBound,
    TentWitness,
    Separation,
    Comod,
    SignatureLaws,
    Density,
}

impl SuiteName {
    pub const ALL: [SuiteName; 9] = [
        SuiteName::Semiconj,
        SuiteName::OplusScaling,
        SuiteName::GridFix,
        SuiteName::ModBound,
        SuiteName::TentWitness,
        SuiteName::Separation,
        SuiteName::Comod,
        SuiteName::SignatureLaws,
        SuiteName::Density,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Semiconj => "semiconj",
            SuiteName::OplusScaling => "oplus-scaling",
            SuiteName::GridFix => "grid-fix",
            SuiteName::ModBound => "mod-bound",
            SuiteName::TentWitness => "tent-witness",
            SuiteName::Separation => "separation",
            SuiteName::Comod => "comod",
            SuiteName::SignatureLaws => "signature-laws",
            SuiteName::Density => "density",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .with_context(|| format!("unknown suite {s:?}"))
    }
}

/// Radii `α_n` for the comod campaign: the distance a perturbed map at
/// coordinate `n` keeps from the lifted map induced at `j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusSchedule {
    /// `α_j = δ`, `α_n = δ/(p_{j+1}⋯p_n)`.
    #[default]
    Proof,
}

impl RadiusSchedule {
    pub fn alpha(self, j: usize, n: usize, delta: &Rational, primes: &PrimeSequence) -> Rational {
        match self {
            RadiusSchedule::Proof => delta / Rational::from(primes.span(j + 1, n)),
        }
    }
}

/// Per-suite parameters. Each suite reads the fields it needs; list-valued
/// fields are cycled over trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub d_min: u64,
    pub d_max: u64,
    pub d: Vec<u64>,
    pub delta: Vec<Rational>,
    pub epsilon: Vec<Rational>,
    /// Separation and density tolerance; `None` takes the suite default.
    pub eta: Option<Rational>,
    pub n_max: usize,
    pub j: Vec<usize>,
    /// Target coordinate of the density experiment.
    pub m: usize,
    /// Components of the pseudo-generic map in the density experiment.
    pub k: usize,
    pub max_breakpoints: usize,
    pub strategy: WitnessStrategy,
    pub alpha: RadiusSchedule,
}

impl Default for Params {
    fn default() -> Self {
        let q = Rational::new;
        Params {
            d_min: 1,
            d_max: 7,
            d: vec![2, 3, 4, 6, 8],
            delta: vec![q(1, 5), q(1, 8), q(1, 6)],
            epsilon: vec![q(1, 10), q(1, 50)],
            eta: None,
            n_max: 3,
            j: vec![2, 3],
            m: 1,
            k: 6,
            max_breakpoints: 12,
            strategy: WitnessStrategy::Exhaustive,
            alpha: RadiusSchedule::Proof,
        }
    }
}

impl Params {
    pub fn eta_for(&self, suite: SuiteName) -> Rational {
        self.eta.clone().unwrap_or_else(|| match suite {
            SuiteName::Density => Rational::new(1, 4),
            _ => Rational::new(1, 20),
        })
    }

    pub fn d_range(&self) -> Vec<u64> {
        (self.d_min..=self.d_max).collect()
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.d_min == 0 || self.d_min > self.d_max {
            bail!("need 1 ≤ d-min ≤ d-max, got {}..{}", self.d_min, self.d_max);
        }
        if self.d.is_empty() || self.d.contains(&0) {
            bail!("--d needs positive degrees");
        }
        if self.delta.is_empty() || self.delta.iter().any(|x| !x.is_positive()) {
            bail!("--delta needs positive values");
        }
        if self.epsilon.is_empty() || self.epsilon.iter().any(|x| !x.is_positive()) {
            bail!("--epsilon needs positive values");
        }
        if self.eta.as_ref().is_some_and(|x| !x.is_positive()) {
            bail!("--eta must be positive");
        }
        if self.n_max == 0 {
            bail!("--n-max must be at least 1");
        }
        if self.j.is_empty() {
            bail!("--j needs at least one coordinate");
        }
        if self.max_breakpoints < 2 {
            bail!("--max-breakpoints must be at least 2");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: SuiteName,
    #[serde(default)]
    pub primes: PrimeSequence,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub params: Params,
    /// Where the JSON report goes; replay files go next to it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(suite: SuiteName, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            suite,
            primes: PrimeSequence::default(),
            trials,
            seed,
            params: Params::default(),
            output: None,
        }
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Applies the seed override from the environment, if set.
    pub fn with_env_seed(mut self) -> anyhow::Result<Self> {
        if let Ok(s) = std::env::var(SEED_ENV) {
            self.seed = s
                .trim()
                .parse()
                .with_context(|| format!("{SEED_ENV}={s:?} is not an unsigned integer"))?;
        }
        Ok(self)
    }

    /// Directory for replay files: next to the report, else the working directory.
    pub fn replay_dir(&self) -> PathBuf {
        self.output
            .as_deref()
            .and_then(Path::parent)
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
    }
}
