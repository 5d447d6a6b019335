//! Seeded verification campaigns, the density experiment and the
//! `knaster-lab` command line, all on top of `knaster-core`.

pub mod campaign;
pub mod cli;
pub mod config;
pub mod density;
pub mod report;
pub mod suites;

pub use campaign::{load_replay, run_campaign, run_replay, Suite};
pub use cli::run;
pub use config::{ExperimentConfig, Params, SuiteName};
pub use density::run_density_experiment;
pub use report::CertificateReport;
