//! Axis-step local search: move to the best of the `2n` neighbours at
//! `x +- delta_i e_i` while it is no worse than the current point.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::rng::Rng;
use crate::space::SearchSpace;
use crate::stats::RunStats;

#[derive(Debug, Clone, PartialEq)]
pub struct LsConfig {
    pub step: Vec<f64>,
    pub max_evals: u64,
}

impl LsConfig {
    /// Steps of `fraction` times each initialization width (0.1% in the
    /// identification experiments).
    pub fn from_space(space: &SearchSpace, fraction: f64, max_evals: u64) -> Self {
        Self {
            step: (0..space.dims()).map(|i| fraction * space.width(i)).collect(),
            max_evals,
        }
    }

    pub fn validate(&self, dims: usize) -> Result<()> {
        if self.step.len() != dims {
            return Err(Error::DimensionMismatch { expected: dims, got: self.step.len() });
        }
        if self.step.iter().any(|d| !(*d > 0.0)) {
            return Err(Error::InvalidParameter("line-search steps must be positive".into()));
        }
        if self.max_evals < 2 * dims as u64 + 1 {
            return Err(Error::InvalidParameter(format!(
                "line search needs at least {} evaluations",
                2 * dims + 1
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Every neighbour is strictly worse.
    LocalMinimum,
    BudgetExhausted,
    /// The best neighbour was visited recently (plateau cycle).
    Cycle,
}

#[derive(Debug, Clone)]
pub struct LsOutcome {
    pub stats: RunStats,
    pub best_x: Vec<f64>,
    pub best_f: f64,
    pub termination: Termination,
    /// Accepted moves.
    pub moves: usize,
}

/// Random grid start in the initialization box, then [`ls_from`].
pub fn ls_run(objective: &dyn Objective, space: &SearchSpace, cfg: &LsConfig, rng: &mut Rng) -> Result<LsOutcome> {
    cfg.validate(space.dims())?;
    let raw = space.sample_uniform(rng);
    let start: Vec<f64> = raw
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let lo = space.init_lo()[i];
            lo + ((x - lo) / cfg.step[i]).round() * cfg.step[i]
        })
        .collect();
    ls_from(objective, space, cfg, start)
}

/// Line search from a given start. Neighbours are scanned dimension by
/// dimension, `+` before `-`; the first of equally good neighbours wins.
/// Neighbours below the space's hard lower limit are skipped.
pub fn ls_from(objective: &dyn Objective, space: &SearchSpace, cfg: &LsConfig, start: Vec<f64>) -> Result<LsOutcome> {
    let n = space.dims();
    cfg.validate(n)?;
    if start.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: start.len() });
    }
    let mut stats = RunStats::new();
    let mut evals = 1u64;
    let mut x = start;
    let mut fx = objective.evaluate(&x);
    let mut sweep = 1;
    stats.record(sweep, evals, fx);
    let mut memory: VecDeque<Vec<f64>> = VecDeque::with_capacity(2 * n + 2);
    memory.push_back(x.clone());
    let mut moves = 0;

    let termination = loop {
        sweep += 1;
        let mut best: Option<(Vec<f64>, f64)> = None;
        let mut exhausted = false;
        'scan: for d in 0..n {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[d] += sign * cfg.step[d];
                if space.hard_lo().is_some_and(|lo| y[d] < lo[d]) {
                    continue;
                }
                if evals >= cfg.max_evals {
                    exhausted = true;
                    break 'scan;
                }
                let fy = objective.evaluate(&y);
                evals += 1;
                if best.as_ref().is_none_or(|(_, bf)| fy < *bf) {
                    best = Some((y, fy));
                }
            }
        }
        let seen = best.as_ref().map_or(fx, |b| b.1.min(fx));
        stats.record(sweep, evals, seen);
        match best {
            Some((y, fy)) if fy <= fx => {
                if memory.contains(&y) {
                    break Termination::Cycle;
                }
                x = y;
                fx = fy;
                moves += 1;
                memory.push_back(x.clone());
                if memory.len() > 2 * n + 1 {
                    memory.pop_front();
                }
                if exhausted {
                    break Termination::BudgetExhausted;
                }
            }
            _ if exhausted => break Termination::BudgetExhausted,
            _ => break Termination::LocalMinimum,
        }
    };
    Ok(LsOutcome { stats, best_x: x, best_f: fx, termination, moves })
}
