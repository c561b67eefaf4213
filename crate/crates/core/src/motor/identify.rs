//! Parameter identification: the summed absolute phase-current error
//! between a candidate motor and reference start-up currents.

use std::io::{self, Write};
use std::sync::atomic::{AtomicU64, Ordering};

use super::model::{sample_times, simulate_startup, PhaseCurrents};
use super::{MotorParams, Supply, Tolerances};
use crate::error::Result;
use crate::objective::Objective;

/// Reference integration tolerances.
pub const REFERENCE_TOL: Tolerances = Tolerances { rel: 1e-7, abs: 1e-9, max_steps: 1_000_000 };
/// Candidate integration tolerances.
pub const CANDIDATE_TOL: Tolerances = Tolerances { rel: 1e-7, abs: 1e-9, max_steps: 200_000 };

/// `sum_k (|di1| + |di2| + |di3|) * T / samples`.
pub fn current_error(reference: &[[f64; 3]], candidate: &[[f64; 3]], dt: f64) -> f64 {
    reference
        .iter()
        .zip(candidate)
        .map(|(r, c)| (r[0] - c[0]).abs() + (r[1] - c[1]).abs() + (r[2] - c[2]).abs())
        .sum::<f64>()
        * dt
}

/// Fitness of `candidate` against `reference`; integration failures are
/// returned as errors.
pub fn identification_fitness(
    candidate: &MotorParams,
    reference: &[[f64; 3]],
    supply: &Supply,
    t_end: f64,
    samples: usize,
    tol: &Tolerances,
) -> Result<f64> {
    let cur = simulate_startup(candidate, supply, t_end, samples, tol)?;
    Ok(current_error(reference, &cur, t_end / samples as f64))
}

/// Identification objective over `[Rs, Rr, Lll, Lm, J]`. Candidates whose
/// simulation fails (or produces non-finite currents) score `penalty`.
#[derive(Debug)]
pub struct IdentificationProblem {
    pub reference: PhaseCurrents,
    pub supply: Supply,
    pub t_end: f64,
    pub samples: usize,
    pub tol: Tolerances,
    /// Ten times the error of a motor drawing no current at all.
    pub penalty: f64,
    failures: AtomicU64,
}

impl IdentificationProblem {
    pub fn new(truth: &MotorParams, supply: Supply, t_end: f64, samples: usize) -> Result<Self> {
        Self::with_tolerances(truth, supply, t_end, samples, REFERENCE_TOL, CANDIDATE_TOL)
    }

    pub fn with_tolerances(
        truth: &MotorParams,
        supply: Supply,
        t_end: f64,
        samples: usize,
        reference_tol: Tolerances,
        candidate_tol: Tolerances,
    ) -> Result<Self> {
        let reference = simulate_startup(truth, &supply, t_end, samples, &reference_tol)?;
        let zero = vec![[0.0; 3]; samples];
        let penalty = 10.0 * current_error(&reference, &zero, t_end / samples as f64);
        Ok(Self {
            reference,
            supply,
            t_end,
            samples,
            tol: candidate_tol,
            penalty,
            failures: AtomicU64::new(0),
        })
    }

    pub fn times(&self) -> Vec<f64> {
        sample_times(self.t_end, self.samples)
    }

    /// Fitness and whether the evaluation failed.
    pub fn fitness(&self, candidate: &MotorParams) -> (f64, bool) {
        match identification_fitness(candidate, &self.reference, &self.supply, self.t_end, self.samples, &self.tol) {
            Ok(f) if f.is_finite() => (f, false),
            _ => (self.penalty, true),
        }
    }

    /// Number of failed evaluations so far.
    pub fn failures(&self) -> u64 {
        self.failures.load(Ordering::Relaxed)
    }
}

impl Objective for IdentificationProblem {
    fn evaluate(&self, x: &[f64]) -> f64 {
        let (f, failed) = match MotorParams::from_slice(x) {
            Ok(p) => self.fitness(&p),
            Err(_) => (self.penalty, true),
        };
        if failed {
            self.failures.fetch_add(1, Ordering::Relaxed);
        }
        f
    }
}

/// Writes `t,i1,i2,i3` rows with 17 significant digits.
pub fn write_reference_csv(mut w: impl Write, times: &[f64], currents: &[[f64; 3]]) -> io::Result<()> {
    writeln!(w, "t,i1,i2,i3")?;
    for (t, c) in times.iter().zip(currents) {
        writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", t, c[0], c[1], c[2])?;
    }
    Ok(())
}
