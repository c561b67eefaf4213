//! Repeated single-objective benchmark runs.

use swarmlab::stats::{mean_std, median, summarize_runs};
use swarmlab::{Rng, RunStats, RunSummary, SearchSpace};

use super::{par_runs, run_single};
use crate::config::{BenchConfig, ExperimentConfig};
use crate::error::CliError;
use crate::output::{num, short, table, OutputFile};

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub label: String,
    /// Per-run progress; `best` is the distance to the optimum value.
    pub runs: Vec<RunStats>,
    pub summary: RunSummary,
}

impl BenchReport {
    pub fn final_values(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.final_best).collect()
    }
}

pub fn space_for(b: &BenchConfig) -> swarmlab::Result<SearchSpace> {
    let s = b.function.settings();
    let space = SearchSpace::cube(b.dims, s.init_lo, s.init_hi)?;
    match b.vmax {
        Some(v) => space.with_vmax(vec![v; b.dims]),
        None => Ok(space),
    }
}

pub fn run_bench(cfg: &ExperimentConfig, b: &BenchConfig, jobs: usize) -> Result<(BenchReport, Vec<OutputFile>), CliError> {
    let space = space_for(b)?;
    let function = b.function;
    let objective = move |x: &[f64]| function.value(x);
    let mut runs = par_runs(cfg.repeats, jobs, |r| {
        let mut rng = Rng::for_run(cfg.seed, r);
        Ok(run_single(&b.optimizer, &objective, &space, b.budget, &mut rng)?.stats)
    })?;
    for r in &mut runs {
        r.mark_closeness(0.0, b.closeness);
    }
    let summary = summarize_runs(&runs, b.closeness)?;
    let report = BenchReport { label: b.optimizer.label(), runs, summary };
    let files = vec![
        OutputFile::new(format!("{}_runs.csv", cfg.name), runs_csv(cfg, &report)),
        OutputFile::new(format!("{}_series.csv", cfg.name), series_csv(cfg, &report)),
        OutputFile::new(format!("{}_summary.txt", cfg.name), summary_text(cfg, b, &report)),
    ];
    Ok((report, files))
}

fn runs_csv(cfg: &ExperimentConfig, rep: &BenchReport) -> String {
    let mut s = String::from("run,seed,evaluations,final_best,iterations_to_closeness,success\n");
    for (i, r) in rep.runs.iter().enumerate() {
        let iters = r.iterations_to_closeness.map_or(String::new(), |v| v.to_string());
        s.push_str(&format!(
            "{i},{},{},{},{iters},{}\n",
            cfg.seed + i as u64,
            r.evaluations(),
            num(r.final_best),
            u8::from(r.succeeded)
        ));
    }
    s
}

fn series_csv(cfg: &ExperimentConfig, rep: &BenchReport) -> String {
    let mut s = String::from("run,iteration,evaluations,best\n");
    for (i, r) in rep.runs.iter().enumerate() {
        for c in r.decimated(cfg.checkpoint) {
            s.push_str(&format!("{i},{},{},{}\n", c.iteration, c.evaluations, num(c.best)));
        }
    }
    s
}

fn summary_text(cfg: &ExperimentConfig, b: &BenchConfig, rep: &BenchReport) -> String {
    let finals = rep.final_values();
    let (mean, std) = mean_std(&finals);
    let best = finals.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = format!(
        "{} {}-d, {}, {} runs, {} evaluations each, closeness {}\n\nFinal distance to optimum\n",
        b.function.name(),
        b.dims,
        rep.label,
        cfg.repeats,
        b.budget,
        b.closeness
    );
    s.push_str(&table(
        &["Mean", "Std", "Median", "Best", "Worst"],
        &[vec![short(mean), short(std), short(median(&finals)), short(best), short(worst)]],
    ));
    let sm = &rep.summary;
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.1}"));
    s.push_str("\nIterations to closeness (successful runs)\n");
    s.push_str(&table(
        &["Avg.", "Med.", "Max.", "Min.", "Suc.%"],
        &[vec![
            opt(sm.avg),
            opt(sm.median),
            opt(sm.max.map(|v| v as f64)),
            opt(sm.min.map(|v| v as f64)),
            format!("{:.0}", sm.success_rate),
        ]],
    ));
    s
}
