//! Command-line front end. Exit codes: 0 when every check passes, 1 on a
//! verification failure, 2 on usage or input errors.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use knaster_core::conjugacy::{
    approx_conjugator_certified, decide_conjugate, grid_block_conjugate_certified, signature, snap_to_grid,
};
use knaster_core::knaster::{
    degree_diagonal, diag_dist, eval_diagonal, extend_point, knaster_dist, DiagonalHomeo, GeneralDiagonalMap,
    PrimeSequence, TruncatedKnasterPoint, WitnessStrategy,
};
use knaster_core::{oplus_power, straighten, tent, verify_semiconjugacy, OpenPlMap, PlHomeo, PlMap, Rational};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::campaign::{load_replay, run_campaign, run_replay, write_replays, write_report};
use crate::config::{ExperimentConfig, SuiteName};
use crate::density::run_density_experiment;
use crate::report::CertificateReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "knaster-lab", version, about = "Exact PL dynamics and Knaster continuum checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Piecewise-linear maps of [0,1].
    #[command(subcommand)]
    Pl(PlCommand),
    /// Tent maps and block sums.
    #[command(subcommand)]
    Tent(TentCommand),
    /// Fixed-point signatures and conjugators.
    #[command(subcommand)]
    Conj(ConjCommand),
    /// Points, distances and diagonal maps of the Knaster continuum.
    #[command(subcommand)]
    Knaster(KnasterCommand),
    /// Run a seeded verification campaign.
    Verify {
        suite: SuiteName,
        #[command(flatten)]
        opts: CampaignArgs,
    },
    /// Run an experiment campaign.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

/// Map arguments take a JSON file path or inline JSON.
#[derive(Subcommand, Debug)]
pub enum PlCommand {
    /// Evaluate a map at a point.
    Eval {
        #[arg(short)]
        f: String,
        #[arg(short)]
        x: Rational,
    },
    /// `f ∘ g`.
    Compose {
        #[arg(short)]
        f: String,
        #[arg(short)]
        g: String,
    },
    /// Inverse of a homeomorphism.
    Invert {
        #[arg(short)]
        f: String,
    },
    /// Exact sup distance.
    Dist {
        #[arg(short)]
        f: String,
        #[arg(short)]
        g: String,
        /// Also print a point where the distance is attained.
        #[arg(long)]
        witness: bool,
    },
    /// Number of laps of an open map.
    Degree {
        #[arg(short)]
        f: String,
    },
    /// `x ↦ 1 − f(1 − x)`.
    Reflect {
        #[arg(short)]
        f: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum TentCommand {
    /// The tent map of degree d.
    Build {
        #[arg(short)]
        d: u64,
    },
    /// `⊕ᵈ(g)`.
    Oplus {
        #[arg(short)]
        g: String,
        #[arg(short)]
        d: u64,
    },
    /// Check `g ∘ T_d = T_d ∘ ⊕ᵈ(g)`.
    Semiconj {
        #[arg(short)]
        g: String,
        #[arg(short)]
        d: u64,
    },
    /// `h` with `f = g ∘ h` for open maps of equal degree.
    Straighten {
        #[arg(short)]
        f: String,
        #[arg(short)]
        g: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConjCommand {
    /// Sign string of the non-fixed components.
    Signature {
        #[arg(short)]
        f: String,
    },
    /// Whether two homeomorphisms are conjugate.
    Decide {
        #[arg(short)]
        f: String,
        #[arg(short)]
        g: String,
    },
    /// A certified approximate conjugator `h` with `h⁻¹fh` near `g`.
    Synthesize {
        #[arg(short)]
        f: String,
        #[arg(short)]
        g: String,
        #[arg(long)]
        eta: Rational,
    },
    /// A block conjugator taking `⊕ᵈ(f)` near `h`.
    Blockwise {
        #[arg(short)]
        f: String,
        #[arg(short)]
        d: u64,
        #[arg(long)]
        h: String,
        #[arg(long)]
        eta: Rational,
    },
    /// Make every grid point `i/d` fixed while staying near a reference map.
    Snap {
        #[arg(long)]
        h: String,
        #[arg(short)]
        d: u64,
        #[arg(long)]
        reference: String,
        #[arg(long)]
        delta: Rational,
    },
}

#[derive(Subcommand, Debug)]
pub enum KnasterCommand {
    /// The point whose coordinate `n` is `x`, down to coordinate 0.
    Point {
        #[arg(short)]
        x: Rational,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value = "diagonal")]
        primes: PrimeSequence,
    },
    /// Certified distance between two points (`-x`, `-y`) or two diagonal
    /// homeomorphisms (`-f`, `-g`, `-n`).
    Dist {
        #[arg(short, requires = "y", conflicts_with_all = ["f", "g"])]
        x: Option<String>,
        #[arg(short)]
        y: Option<String>,
        #[arg(short, requires_all = ["g", "n"])]
        f: Option<String>,
        #[arg(short)]
        g: Option<String>,
        #[arg(short)]
        n: Option<usize>,
        #[arg(long, default_value = "diagonal")]
        primes: PrimeSequence,
    },
    /// The same diagonal homeomorphism induced at a higher coordinate.
    Lift {
        #[arg(short)]
        f: String,
        #[arg(short)]
        m: usize,
        #[arg(long, default_value = "diagonal")]
        primes: PrimeSequence,
    },
    /// Image of a point under a diagonal homeomorphism.
    Evaldiag {
        #[arg(short)]
        f: String,
        #[arg(short)]
        x: String,
        #[arg(long, default_value = "diagonal")]
        primes: PrimeSequence,
    },
    /// Degree of a general diagonal map.
    Degree {
        #[arg(short)]
        f: String,
        #[arg(long, default_value = "diagonal")]
        primes: PrimeSequence,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCommand {
    /// Conjugates of a pseudo-generic map approaching random diagonal targets.
    Density {
        #[command(flatten)]
        opts: CampaignArgs,
    },
}

/// Flags mirror the fields of a config file and override it.
#[derive(Args, Debug, Default)]
pub struct CampaignArgs {
    /// JSON config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Re-run a replay file written by a failed campaign.
    #[arg(long, conflicts_with = "config")]
    pub replay: Option<PathBuf>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Overrides both the config file and the environment.
    #[arg(long)]
    pub seed: Option<u64>,
    /// `diagonal`, `all2`, or a comma list such as `2,3,5`.
    #[arg(long)]
    pub primes: Option<PrimeSequence>,
    #[arg(long)]
    pub d_min: Option<u64>,
    #[arg(long)]
    pub d_max: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub d: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    pub delta: Option<Vec<Rational>>,
    #[arg(long, value_delimiter = ',')]
    pub epsilon: Option<Vec<Rational>>,
    #[arg(long)]
    pub eta: Option<Rational>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub j: Option<Vec<usize>>,
    #[arg(short, long)]
    pub m: Option<usize>,
    #[arg(short, long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub max_breakpoints: Option<usize>,
    #[arg(long, value_parser = parse_strategy)]
    pub strategy: Option<WitnessStrategy>,
    /// Write the JSON report here; replay files go next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    pub json: bool,
}

fn parse_strategy(s: &str) -> Result<WitnessStrategy, String> {
    match s {
        "exhaustive" => Ok(WitnessStrategy::Exhaustive),
        "proof-trace" | "proof_trace" => Ok(WitnessStrategy::ProofTrace),
        _ => Err(format!("unknown strategy {s:?}: use exhaustive or proof-trace")),
    }
}

const DEFAULT_TRIALS: usize = 100;

impl CampaignArgs {
    /// Config file, then the environment seed, then explicit flags.
    pub fn resolve(&self, suite: SuiteName) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let cfg = ExperimentConfig::load(path)?;
                if cfg.suite != suite {
                    bail!("config {} is for suite {}, not {suite}", path.display(), cfg.suite);
                }
                cfg
            }
            None => ExperimentConfig::new(suite, DEFAULT_TRIALS, 0),
        }
        .with_env_seed()?;
        let p = &mut cfg.params;
        macro_rules! set {
            ($dst:expr, $src:expr) => {
                if let Some(v) = &$src {
                    $dst = v.clone();
                }
            };
        }
        set!(cfg.trials, self.trials);
        set!(cfg.seed, self.seed);
        set!(cfg.primes, self.primes);
        set!(p.d_min, self.d_min);
        set!(p.d_max, self.d_max);
        set!(p.d, self.d);
        set!(p.delta, self.delta);
        set!(p.epsilon, self.epsilon);
        set!(p.n_max, self.n_max);
        set!(p.j, self.j);
        set!(p.m, self.m);
        set!(p.k, self.k);
        set!(p.max_breakpoints, self.max_breakpoints);
        set!(p.strategy, self.strategy);
        if self.eta.is_some() {
            p.eta = self.eta.clone();
        }
        if self.out.is_some() {
            cfg.output = self.out.clone();
        }
        p.validate()?;
        Ok(cfg)
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

/// Reads JSON from a file, or parses the argument itself if it looks inline.
fn read_json<T: DeserializeOwned>(arg: &str) -> anyhow::Result<T> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return serde_json::from_str(t).context("parsing inline JSON");
    }
    let path = Path::new(arg);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("values serialize"));
}

/// Prints a verification failure and yields exit code 1.
fn failed(msg: impl std::fmt::Display) -> i32 {
    eprintln!("verification failed: {msg}");
    EXIT_FAILED
}

fn dispatch(command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Pl(c) => pl(c),
        Command::Tent(c) => tent_cmd(c),
        Command::Conj(c) => conj(c),
        Command::Knaster(c) => knaster(c),
        Command::Verify { suite, opts } => campaign(suite, &opts),
        Command::Experiment(ExperimentCommand::Density { opts }) => campaign(SuiteName::Density, &opts),
    }
}

fn pl(c: PlCommand) -> anyhow::Result<i32> {
    match c {
        PlCommand::Eval { f, x } => {
            let f: PlMap = read_json(&f)?;
            println!("{}", f.eval(&x)?);
        }
        PlCommand::Compose { f, g } => {
            let f: PlMap = read_json(&f)?;
            let g: PlMap = read_json(&g)?;
            print_json(&f.compose(&g));
        }
        PlCommand::Invert { f } => {
            let f: PlHomeo = read_json(&f)?;
            print_json(&f.invert());
        }
        PlCommand::Dist { f, g, witness } => {
            let f: PlMap = read_json(&f)?;
            let g: PlMap = read_json(&g)?;
            let (d, at) = f.sup_dist(&g);
            if witness {
                println!("{d} at {at}");
            } else {
                println!("{d}");
            }
        }
        PlCommand::Degree { f } => {
            let f: OpenPlMap = read_json(&f)?;
            println!("{}", f.degree());
        }
        PlCommand::Reflect { f } => {
            let f: PlMap = read_json(&f)?;
            print_json(&f.reflect());
        }
    }
    Ok(EXIT_OK)
}

fn tent_cmd(c: TentCommand) -> anyhow::Result<i32> {
    match c {
        TentCommand::Build { d } => print_json(tent(d)?.as_map()),
        TentCommand::Oplus { g, d } => {
            let g: PlHomeo = read_json(&g)?;
            print_json(&oplus_power(&g, d)?);
        }
        TentCommand::Semiconj { g, d } => {
            let g: PlHomeo = read_json(&g)?;
            let rec = verify_semiconjugacy(&g, d)?;
            print_json(&rec);
            if !rec.equal {
                return Ok(failed(format!("sides differ at x = {}", rec.counterexample.expect("set when unequal"))));
            }
        }
        TentCommand::Straighten { f, g } => {
            let f: OpenPlMap = read_json(&f)?;
            let g: OpenPlMap = read_json(&g)?;
            print_json(&straighten(&f, &g)?);
        }
    }
    Ok(EXIT_OK)
}

fn conj(c: ConjCommand) -> anyhow::Result<i32> {
    match c {
        ConjCommand::Signature { f } => {
            let f: PlHomeo = read_json(&f)?;
            println!("{}", signature(&f));
        }
        ConjCommand::Decide { f, g } => {
            let f: PlHomeo = read_json(&f)?;
            let g: PlHomeo = read_json(&g)?;
            println!("{}", decide_conjugate(&f, &g));
        }
        ConjCommand::Synthesize { f, g, eta } => {
            let f: PlHomeo = read_json(&f)?;
            let g: PlHomeo = read_json(&g)?;
            match approx_conjugator_certified(&f, &g, &eta) {
                Ok(cert) => print_json(&cert),
                Err(e) => return Ok(failed(e)),
            }
        }
        ConjCommand::Blockwise { f, d, h, eta } => {
            let f: PlHomeo = read_json(&f)?;
            let h: PlHomeo = read_json(&h)?;
            match grid_block_conjugate_certified(&f, d, &h, &eta) {
                Ok(b) => print_json(&b),
                Err(e) => return Ok(failed(e)),
            }
        }
        ConjCommand::Snap { h, d, reference, delta } => {
            let h: PlHomeo = read_json(&h)?;
            let reference: PlHomeo = read_json(&reference)?;
            match snap_to_grid(&h, d, &reference, &delta) {
                Ok(s) => print_json(&s),
                Err(e) => return Ok(failed(e)),
            }
        }
    }
    Ok(EXIT_OK)
}

fn knaster(c: KnasterCommand) -> anyhow::Result<i32> {
    match c {
        KnasterCommand::Point { x, n, primes } => print_json(&extend_point(&x, n, &primes)?),
        KnasterCommand::Dist { x, y, f, g, n, primes } => match (x, y, f, g, n) {
            (Some(x), Some(y), _, _, _) => {
                let x: TruncatedKnasterPoint = read_json(&x)?;
                let y: TruncatedKnasterPoint = read_json(&y)?;
                print_json(&knaster_dist(&x, &y, &primes)?);
            }
            (_, _, Some(f), Some(g), Some(n)) => {
                let f: DiagonalHomeo = read_json(&f)?;
                let g: DiagonalHomeo = read_json(&g)?;
                print_json(&diag_dist(&f, &g, n, &primes)?);
            }
            _ => bail!("give either -x and -y, or -f, -g and -n"),
        },
        KnasterCommand::Lift { f, m, primes } => {
            let f: DiagonalHomeo = read_json(&f)?;
            print_json(&f.lift(m, &primes)?);
        }
        KnasterCommand::Evaldiag { f, x, primes } => {
            let f: DiagonalHomeo = read_json(&f)?;
            let x: TruncatedKnasterPoint = read_json(&x)?;
            print_json(&eval_diagonal(&f, &x, &primes)?);
        }
        KnasterCommand::Degree { f, primes } => {
            let raw: serde_json::Value = read_json(&f)?;
            let g: GeneralDiagonalMap = serde_json::from_value(raw).context("parsing general diagonal map")?;
            // rebuild through the checked constructor
            let g = GeneralDiagonalMap::new(g.target, g.source, g.window)?;
            println!("{}", degree_diagonal(&g, &primes));
        }
    }
    Ok(EXIT_OK)
}

fn emit(report: &CertificateReport, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.table());
    }
}

fn campaign(suite: SuiteName, opts: &CampaignArgs) -> anyhow::Result<i32> {
    let mut report = match &opts.replay {
        Some(path) => {
            let replay = load_replay(path)?;
            if replay.config.suite != suite {
                bail!("{} replays suite {}, not {suite}", path.display(), replay.config.suite);
            }
            run_replay(&replay)?
        }
        None => {
            let cfg = opts.resolve(suite)?;
            let mut report = if suite == SuiteName::Density {
                run_density_experiment(&cfg)?
            } else {
                run_campaign(&cfg)?
            };
            if !report.all_passed() {
                write_replays(&mut report, &cfg.replay_dir())?;
            }
            report
        }
    };
    if let Some(out) = &opts.out {
        report.config.output = Some(out.clone());
        write_report(&report, out)?;
    }
    emit(&report, opts.json);
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_FAILED })
}
