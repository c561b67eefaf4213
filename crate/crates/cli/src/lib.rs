//! Config-driven experiment runner.
//!
//! An experiment is described by an INI file with an `[experiment]` section
//! (kind, name, seed, repeats, checkpoint, out) plus `[problem]`,
//! `[optimizer]` and, for multi-objective runs, `[metric]` sections. Every
//! file written starts with the fully resolved configuration as `# `
//! comment lines; [`ExperimentConfig::from_header`] reads it back, and any
//! output file can be passed as `--config` to replay the experiment.
//!
//! Output files, by kind (`NAME` is the experiment name):
//!
//! - bench: `NAME_runs.csv`, `NAME_series.csv`, `NAME_summary.txt`
//! - moo: `NAME_series.csv`, `NAME_runs.csv`, `NAME_summary.txt`
//! - ident: `NAME_progress.csv`, `NAME_runs.csv`, `NAME_summary.txt`,
//!   `NAME_reference_currents.csv`
//! - schema: `NAME.txt`, `NAME.csv`
//! - influence: `NAME.csv`, `NAME.txt`

pub mod config;
pub mod error;
pub mod ini;
pub mod output;
pub mod runners;

use std::path::PathBuf;

pub use config::{Experiment, ExperimentConfig, ExperimentKind, Overrides};
pub use error::{CliError, ConfigError};
use runners::bench::BenchReport;
use runners::ident::IdentReport;
use runners::moo::MooReport;
use runners::tables::InfluenceReport;
use swarmlab::schema::SchemaTable;

#[derive(Debug, Clone)]
pub enum Outcome {
    Bench(BenchReport),
    Moo(MooReport),
    Ident(IdentReport),
    Schema(SchemaTable),
    Influence(InfluenceReport),
}

#[derive(Debug, Clone)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub outcome: Outcome,
}

/// Runs the experiment on up to `jobs` threads (0 = one per core) and writes
/// its files into `cfg.out`.
pub fn run(cfg: &ExperimentConfig, jobs: usize) -> Result<Report, CliError> {
    let (outcome, files) = match &cfg.experiment {
        Experiment::Bench(b) => {
            let (r, f) = runners::bench::run_bench(cfg, b, jobs)?;
            (Outcome::Bench(r), f)
        }
        Experiment::Moo(m) => {
            let (r, f) = runners::moo::run_moo(cfg, m, jobs)?;
            (Outcome::Moo(r), f)
        }
        Experiment::Ident(i) => {
            let (r, f) = runners::ident::run_ident(cfg, i, jobs)?;
            (Outcome::Ident(r), f)
        }
        Experiment::Schema(s) => {
            let (r, f) = runners::tables::run_schema(cfg, s)?;
            (Outcome::Schema(r), f)
        }
        Experiment::Influence(s) => {
            let (r, f) = runners::tables::run_influence(cfg, s, jobs)?;
            (Outcome::Influence(r), f)
        }
    };
    let files = output::write_files(&cfg.out, &cfg.header(), &files)?;
    Ok(Report { files, outcome })
}

/// Reads the config file (if any) and applies command-line overrides. An
/// output file may stand in for the config; its header is used.
pub fn load(path: Option<&std::path::Path>, overrides: &Overrides) -> Result<ExperimentConfig, CliError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| {
            CliError::Config(ConfigError::new(format!("cannot read {}: {e}", p.display())))
        })?,
        None => String::new(),
    };
    Ok(ExperimentConfig::parse_any(&text, overrides)?)
}
