//! Per-run progress records and cross-run summaries.

use crate::error::{Error, Result};

/// Best-so-far value after a given iteration of an optimizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    /// 1-based iteration (or generation / sweep) index; iteration 1 is the
    /// evaluation of the initial population.
    pub iteration: usize,
    /// Total objective evaluations consumed so far.
    pub evaluations: u64,
    pub best: f64,
}

/// Progress of a single optimizer run.
///
/// `best_per_eval` is non-increasing in `best`: [`RunStats::record`] keeps the
/// running minimum.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunStats {
    pub best_per_eval: Vec<Checkpoint>,
    pub final_best: f64,
    pub iterations_to_closeness: Option<usize>,
    pub succeeded: bool,
}

impl RunStats {
    pub fn new() -> Self {
        Self {
            best_per_eval: Vec::new(),
            final_best: f64::INFINITY,
            iterations_to_closeness: None,
            succeeded: false,
        }
    }

    pub fn record(&mut self, iteration: usize, evaluations: u64, best: f64) {
        let best = best.min(self.final_best);
        self.final_best = best;
        self.best_per_eval.push(Checkpoint {
            iteration,
            evaluations,
            best,
        });
    }

    pub fn evaluations(&self) -> u64 {
        self.best_per_eval.last().map_or(0, |c| c.evaluations)
    }

    pub fn iterations(&self) -> usize {
        self.best_per_eval.last().map_or(0, |c| c.iteration)
    }

    /// First iteration whose best value is within `closeness` of `optimum`.
    pub fn iterations_to(&self, optimum: f64, closeness: f64) -> Option<usize> {
        self.best_per_eval
            .iter()
            .find(|c| (c.best - optimum).abs() <= closeness)
            .map(|c| c.iteration)
    }

    /// Fills `iterations_to_closeness` and `succeeded` for the given target.
    pub fn mark_closeness(&mut self, optimum: f64, closeness: f64) {
        self.iterations_to_closeness = self.iterations_to(optimum, closeness);
        self.succeeded = self.iterations_to_closeness.is_some();
    }

    /// Best value after at most `evaluations` evaluations.
    pub fn best_at(&self, evaluations: u64) -> Option<f64> {
        self.best_per_eval
            .iter()
            .take_while(|c| c.evaluations <= evaluations)
            .last()
            .map(|c| c.best)
    }

    /// One checkpoint per `every` evaluations: the latest state at or before
    /// each multiple of `every`, plus the final checkpoint.
    pub fn decimated(&self, every: u64) -> Vec<Checkpoint> {
        let every = every.max(1);
        let cps = &self.best_per_eval;
        let mut out: Vec<Checkpoint> = Vec::new();
        let Some(last) = cps.last() else {
            return out;
        };
        let mut idx = 0;
        let mut mark = every;
        while mark <= last.evaluations {
            while idx + 1 < cps.len() && cps[idx + 1].evaluations <= mark {
                idx += 1;
            }
            let c = cps[idx];
            if c.evaluations <= mark && out.last().is_none_or(|l| l.iteration != c.iteration) {
                out.push(c);
            }
            mark += every;
        }
        if out.last().is_none_or(|l| l.iteration != last.iteration) {
            out.push(*last);
        }
        out
    }
}

/// Iteration-count statistics over the successful runs of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub runs: usize,
    pub successes: usize,
    pub avg: Option<f64>,
    pub median: Option<f64>,
    pub max: Option<usize>,
    pub min: Option<usize>,
    /// Percentage of all runs that reached the closeness target.
    pub success_rate: f64,
}

/// Average, median, max and min iterations-to-closeness over successful runs,
/// plus the success rate over all runs. Values are distances to an optimum of
/// zero.
pub fn summarize_runs(runs: &[RunStats], closeness: f64) -> Result<RunSummary> {
    if runs.is_empty() {
        return Err(Error::Empty("no runs to summarize"));
    }
    let mut hits: Vec<usize> = runs
        .iter()
        .filter_map(|r| r.iterations_to(0.0, closeness))
        .collect();
    hits.sort_unstable();
    let successes = hits.len();
    let (avg, median, max, min) = if hits.is_empty() {
        (None, None, None, None)
    } else {
        let avg = hits.iter().sum::<usize>() as f64 / successes as f64;
        (Some(avg), Some(median_sorted(&hits)), hits.last().copied(), hits.first().copied())
    };
    Ok(RunSummary {
        runs: runs.len(),
        successes,
        avg,
        median,
        max,
        min,
        success_rate: 100.0 * successes as f64 / runs.len() as f64,
    })
}

fn median_sorted(v: &[usize]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

/// Mean and sample standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Median of a slice of reals (NaN-free).
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
