pub mod bench;
pub mod ident;
pub mod moo;
pub mod tables;

use rayon::prelude::*;
use swarmlab::ga::ga_run;
use swarmlab::linesearch::{ls_run, LsConfig};
use swarmlab::pso::pso_run;
use swarmlab::{Objective, Rng, RunStats, SearchSpace};

use crate::config::SingleOptimizer;
use crate::error::CliError;

/// Result of one single-objective optimizer run.
#[derive(Debug, Clone)]
pub struct SingleRun {
    pub stats: RunStats,
    pub best_x: Vec<f64>,
    pub best_f: f64,
}

pub fn run_single(
    opt: &SingleOptimizer,
    objective: &dyn Objective,
    space: &SearchSpace,
    budget: u64,
    rng: &mut Rng,
) -> swarmlab::Result<SingleRun> {
    Ok(match opt {
        SingleOptimizer::Pso(cfg) => {
            let o = pso_run(objective, space, cfg, budget, rng)?;
            SingleRun { stats: o.stats, best_x: o.best_x, best_f: o.best_f }
        }
        SingleOptimizer::Ga(cfg) => {
            let o = ga_run(objective, space, cfg, budget, rng)?;
            SingleRun { stats: o.stats, best_x: o.best.genome, best_f: o.best.fitness }
        }
        SingleOptimizer::Ls { step_fraction } => {
            let cfg = LsConfig::from_space(space, *step_fraction, budget);
            let o = ls_run(objective, space, &cfg, rng)?;
            SingleRun { stats: o.stats, best_x: o.best_x, best_f: o.best_f }
        }
    })
}

/// Runs `f(0..repeats)` on up to `jobs` threads (0 = one per core) and
/// returns the results in run order.
pub fn par_runs<T, F>(repeats: usize, jobs: usize, f: F) -> Result<Vec<T>, CliError>
where
    T: Send,
    F: Fn(usize) -> Result<T, CliError> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    pool.install(|| (0..repeats).into_par_iter().map(f).collect())
}
