use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use swarmlab_cli::{load, run, Overrides};

/// Run a swarmlab experiment described by a config file.
#[derive(Parser, Debug)]
#[command(name = "swarmlab", version, about)]
struct Args {
    /// Experiment config (INI). Optional when --experiment is given.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed; run r uses seed + r.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repeats: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Experiment kind: bench, moo, ident, schema or influence.
    #[arg(long)]
    experiment: Option<String>,
    /// Parallel runs (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let overrides = Overrides {
        experiment: args.experiment,
        seed: args.seed,
        repeats: args.repeats,
        out: args.out,
    };
    let result = load(args.config.as_deref(), &overrides).and_then(|cfg| run(&cfg, args.jobs));
    match result {
        Ok(report) => {
            for f in &report.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("swarmlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
