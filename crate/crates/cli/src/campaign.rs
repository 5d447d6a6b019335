//! Seeded campaigns: generate one input per trial from its own RNG stream,
//! check it, and collect the verdicts in trial order.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use knaster_core::gen::trial_rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::config::{ExperimentConfig, SuiteName};
use crate::density::Density;
use crate::report::{CertificateReport, Replay, Timing, TrialRecord};
use crate::suites::{Comod, GridFix, ModBound, OplusScaling, Semiconj, Separation, SignatureLaws, TentWitness};

/// `Ok` carries the certificate, `Err` the failure diagnostics.
pub type Outcome = Result<Value, String>;

pub trait Suite: Sync {
    type Input: Serialize + DeserializeOwned + Send;

    fn generate(&self, cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, index: usize) -> Self::Input;

    /// Parameter cell used to aggregate the table.
    fn group(&self, input: &Self::Input) -> String;

    fn check(&self, cfg: &ExperimentConfig, input: &Self::Input) -> Outcome;
}

fn evaluate<S: Suite>(suite: &S, cfg: &ExperimentConfig, index: usize, input: &S::Input) -> TrialRecord {
    let group = suite.group(input);
    let outcome = catch_unwind(AssertUnwindSafe(|| suite.check(cfg, input))).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".into());
        Err(format!("panic: {msg}"))
    });
    match outcome {
        Ok(certificate) => TrialRecord { index, group, passed: true, certificate, message: None, replay: None },
        Err(message) => {
            let mut config = cfg.clone();
            config.output = None;
            let replay = Replay {
                config,
                index,
                input: serde_json::to_value(input).expect("inputs serialize"),
                message: Some(message.clone()),
            };
            TrialRecord {
                index,
                group,
                passed: false,
                certificate: Value::Null,
                message: Some(message),
                replay: Some(replay),
            }
        }
    }
}

fn run_suite<S: Suite>(suite: &S, cfg: &ExperimentConfig) -> Vec<TrialRecord> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i as u64);
            let input = suite.generate(cfg, &mut rng, i);
            evaluate(suite, cfg, i, &input)
        })
        .collect()
}

fn replay_suite<S: Suite>(suite: &S, replay: &Replay) -> anyhow::Result<TrialRecord> {
    let input: S::Input = serde_json::from_value(replay.input.clone())
        .with_context(|| format!("replay input does not fit suite {}", replay.config.suite))?;
    Ok(evaluate(suite, &replay.config, replay.index, &input))
}

fn trials_for(cfg: &ExperimentConfig) -> Vec<TrialRecord> {
    match cfg.suite {
        SuiteName::Semiconj => run_suite(&Semiconj, cfg),
        SuiteName::OplusScaling => run_suite(&OplusScaling, cfg),
        SuiteName::GridFix => run_suite(&GridFix, cfg),
        SuiteName::ModBound => run_suite(&ModBound, cfg),
        SuiteName::TentWitness => run_suite(&TentWitness, cfg),
        SuiteName::Separation => run_suite(&Separation, cfg),
        SuiteName::Comod => run_suite(&Comod, cfg),
        SuiteName::SignatureLaws => run_suite(&SignatureLaws, cfg),
        SuiteName::Density => run_suite(&Density, cfg),
    }
}

/// Runs every trial of `cfg`. Pure: nothing is written to disk.
pub fn run_campaign(cfg: &ExperimentConfig) -> anyhow::Result<CertificateReport> {
    cfg.params.validate()?;
    let start = Instant::now();
    let trials = trials_for(cfg);
    let timing = Timing { total_ms: start.elapsed().as_millis() };
    Ok(CertificateReport::new(cfg.clone(), trials, timing))
}

/// Re-runs the single trial stored in a replay file.
pub fn run_replay(replay: &Replay) -> anyhow::Result<CertificateReport> {
    let start = Instant::now();
    let cfg = &replay.config;
    let record = match cfg.suite {
        SuiteName::Semiconj => replay_suite(&Semiconj, replay),
        SuiteName::OplusScaling => replay_suite(&OplusScaling, replay),
        SuiteName::GridFix => replay_suite(&GridFix, replay),
        SuiteName::ModBound => replay_suite(&ModBound, replay),
        SuiteName::TentWitness => replay_suite(&TentWitness, replay),
        SuiteName::Separation => replay_suite(&Separation, replay),
        SuiteName::Comod => replay_suite(&Comod, replay),
        SuiteName::SignatureLaws => replay_suite(&SignatureLaws, replay),
        SuiteName::Density => replay_suite(&Density, replay),
    }?;
    let timing = Timing { total_ms: start.elapsed().as_millis() };
    let mut cfg = cfg.clone();
    cfg.trials = 1;
    Ok(CertificateReport::new(cfg, vec![record], timing))
}

pub fn load_replay(path: &Path) -> anyhow::Result<Replay> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing replay file {}", path.display()))
}

/// Writes one replay file per failed trial into `dir` and lists them in the report.
pub fn write_replays(report: &mut CertificateReport, dir: &Path) -> anyhow::Result<()> {
    let cfg = &report.config;
    let mut written: Vec<PathBuf> = Vec::new();
    for t in &report.trials {
        if let Some(r) = &t.replay {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(format!("replay-{}-seed{}-trial{}.json", cfg.suite, cfg.seed, t.index));
            let text = serde_json::to_string_pretty(r).expect("replays serialize");
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
    }
    report.replay_files = written;
    Ok(())
}

pub fn write_report(report: &CertificateReport, path: &Path) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))
}
