//! Campaign reports: per-trial verdicts, a summary, and a plain-text table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    /// Parameter cell the trial belongs to, e.g. `d=3 δ=1/5`.
    pub group: String,
    pub passed: bool,
    /// Certificate data on success.
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub certificate: Value,
    /// Failure diagnostics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Inputs and parameters that reproduce a failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay: Option<Replay>,
}

/// A standalone failing case, replayable through the same subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    pub config: ExperimentConfig,
    pub index: usize,
    pub input: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub config: ExperimentConfig,
    pub summary: Summary,
    pub trials: Vec<TrialRecord>,
    /// Files written for failed trials.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub replay_files: Vec<PathBuf>,
    /// Wall-clock data; excluded from reproducibility comparisons.
    pub timing: Timing,
}

impl CertificateReport {
    pub fn new(config: ExperimentConfig, trials: Vec<TrialRecord>, timing: Timing) -> Self {
        let passed = trials.iter().filter(|t| t.passed).count();
        let summary = Summary { trials: trials.len(), passed, failed: trials.len() - passed };
        CertificateReport { config, summary, trials, replay_files: Vec::new(), timing }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The JSON form without wall-clock data, for reproducibility checks.
    pub fn reproducible_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        if let Value::Object(map) = &mut v {
            map.remove("timing");
        }
        serde_json::to_string_pretty(&v).expect("reports serialize")
    }

    /// Counts per parameter group, then the failed trials.
    pub fn table(&self) -> String {
        let mut groups: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for t in &self.trials {
            let e = groups.entry(t.group.as_str()).or_default();
            e.0 += 1;
            if t.passed {
                e.1 += 1;
            }
        }
        let width = groups.keys().map(|g| g.chars().count()).max().unwrap_or(0).max(5);
        let mut out = String::new();
        let cfg = &self.config;
        let _ = writeln!(
            out,
            "suite {}  primes {}  seed {}  trials {}",
            cfg.suite, cfg.primes, cfg.seed, cfg.trials
        );
        let _ = writeln!(out, "{:<width$}  {:>6}  {:>6}  {:>6}", "group", "trials", "passed", "failed");
        for (g, (n, ok)) in &groups {
            let _ = writeln!(out, "{:<width$}  {:>6}  {:>6}  {:>6}", g, n, ok, n - ok);
        }
        let s = &self.summary;
        let _ = writeln!(out, "{:<width$}  {:>6}  {:>6}  {:>6}", "total", s.trials, s.passed, s.failed);
        for t in self.trials.iter().filter(|t| !t.passed) {
            let _ = writeln!(
                out,
                "FAILED trial {} ({}): {}",
                t.index,
                t.group,
                t.message.as_deref().unwrap_or("")
            );
        }
        for p in &self.replay_files {
            let _ = writeln!(out, "replay file: {}", p.display());
        }
        let _ = writeln!(out, "{}  ({} ms)", if self.all_passed() { "PASS" } else { "FAIL" }, self.timing.total_ms);
        out
    }
}
