//! Induction-motor parameter identification runs.

use swarmlab::motor::{write_reference_csv, IdentificationProblem, MotorParams, Supply};
use swarmlab::stats::mean_std;
use swarmlab::{Objective, Rng, RunStats};

use super::{par_runs, run_single};
use crate::config::{ExperimentConfig, IdentConfig};
use crate::error::CliError;
use crate::output::{num, short, table, OutputFile};

#[derive(Debug, Clone)]
pub struct IdentRun {
    pub stats: RunStats,
    pub fitness: f64,
    pub params: MotorParams,
    /// Percentage deviation from the true value, per parameter.
    pub deviation: [f64; 5],
    /// Candidates whose simulation failed and were scored with the penalty.
    pub failures: u64,
}

#[derive(Debug, Clone)]
pub struct IdentReport {
    pub label: String,
    pub runs: Vec<IdentRun>,
}

impl IdentReport {
    pub fn mean_fitness(&self) -> f64 {
        let v: Vec<f64> = self.runs.iter().map(|r| r.fitness).collect();
        mean_std(&v).0
    }

    pub fn mean_deviation(&self) -> [f64; 5] {
        let n = self.runs.len() as f64;
        std::array::from_fn(|k| self.runs.iter().map(|r| r.deviation[k]).sum::<f64>() / n)
    }
}

fn problem(id: &IdentConfig) -> swarmlab::Result<IdentificationProblem> {
    IdentificationProblem::new(&MotorParams::TRUE, Supply::default(), id.t_end, id.samples)
}

fn one_run(id: &IdentConfig, seed: u64, r: usize) -> Result<IdentRun, CliError> {
    let truth = MotorParams::TRUE;
    let problem = problem(id)?;
    let (best_x, stats) = if id.inject_truth {
        let x = truth.to_array().to_vec();
        let mut stats = RunStats::new();
        stats.record(1, 1, problem.evaluate(&x));
        (x, stats)
    } else {
        let space = MotorParams::search_space();
        let mut rng = Rng::for_run(seed, r);
        let out = run_single(&id.optimizer, &problem, &space, id.budget, &mut rng)?;
        (out.best_x, out.stats)
    };
    let params = MotorParams::from_slice(&best_x)?;
    Ok(IdentRun {
        fitness: stats.final_best,
        deviation: params.deviation_pct(&truth),
        params,
        stats,
        failures: problem.failures(),
    })
}

pub fn run_ident(cfg: &ExperimentConfig, id: &IdentConfig, jobs: usize) -> Result<(IdentReport, Vec<OutputFile>), CliError> {
    let reference = problem(id)?;
    let mut currents = Vec::new();
    write_reference_csv(&mut currents, &reference.times(), &reference.reference)
        .expect("writing to memory cannot fail");
    let runs = par_runs(cfg.repeats, jobs, |r| one_run(id, cfg.seed, r))?;
    let label = if id.inject_truth { "truth".to_string() } else { id.optimizer.label() };
    let report = IdentReport { label, runs };
    let files = vec![
        OutputFile::new(format!("{}_progress.csv", cfg.name), progress_csv(cfg, &report)),
        OutputFile::new(format!("{}_runs.csv", cfg.name), runs_csv(cfg, &report)),
        OutputFile::new(format!("{}_summary.txt", cfg.name), summary_text(cfg, id, &report)),
        OutputFile::new(
            format!("{}_reference_currents.csv", cfg.name),
            String::from_utf8(currents).expect("ASCII output"),
        ),
    ];
    Ok((report, files))
}

fn progress_csv(cfg: &ExperimentConfig, rep: &IdentReport) -> String {
    let mut s = String::from("run,evaluations,best\n");
    for (i, r) in rep.runs.iter().enumerate() {
        for c in r.stats.decimated(cfg.checkpoint) {
            s.push_str(&format!("{i},{},{}\n", c.evaluations, num(c.best)));
        }
    }
    s
}

fn runs_csv(cfg: &ExperimentConfig, rep: &IdentReport) -> String {
    let names = MotorParams::NAMES;
    let mut s = format!(
        "run,seed,evaluations,fitness,{},{},failures\n",
        names.join(","),
        names.map(|n| format!("dev_{n}")).join(",")
    );
    for (i, r) in rep.runs.iter().enumerate() {
        let params: Vec<String> = r.params.to_array().iter().map(|v| num(*v)).collect();
        let devs: Vec<String> = r.deviation.iter().map(|v| num(*v)).collect();
        s.push_str(&format!(
            "{i},{},{},{},{},{},{}\n",
            cfg.seed + i as u64,
            r.stats.evaluations(),
            num(r.fitness),
            params.join(","),
            devs.join(","),
            r.failures
        ));
    }
    s
}

fn summary_text(cfg: &ExperimentConfig, id: &IdentConfig, rep: &IdentReport) -> String {
    let fits: Vec<f64> = rep.runs.iter().map(|r| r.fitness).collect();
    let (mean, std) = mean_std(&fits);
    let best = fits.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = fits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = format!(
        "Motor identification, {}, {} runs, {} evaluations each, T = {} s, {} samples\n\nFinal fitness\n",
        rep.label, cfg.repeats, id.budget, id.t_end, id.samples
    );
    s.push_str(&table(
        &["Mean", "Std", "Best", "Worst"],
        &[vec![short(mean), short(std), short(best), short(worst)]],
    ));
    s.push_str("\nAverage percentage deviation of the estimated parameters\n");
    let dev = rep.mean_deviation();
    s.push_str(&table(&MotorParams::NAMES, &[dev.iter().map(|d| format!("{d:.4}")).collect()]));
    let failures: u64 = rep.runs.iter().map(|r| r.failures).sum();
    s.push_str(&format!("\nFailed simulations: {failures}\n"));
    s
}
