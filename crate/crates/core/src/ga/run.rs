//! Generational loop of the real-coded GA.

use super::operators::{polynomial_mutation, sbx_crossover};
use super::selection::{fps_scores, select_fps, select_rank, select_tournament, sigma_scale, Selection};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::rng::Rng;
use crate::space::SearchSpace;
use crate::stats::RunStats;

#[derive(Debug, Clone, PartialEq)]
pub struct RealIndividual {
    pub genome: Vec<f64>,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub pop_size: usize,
    pub p_c: f64,
    pub eta_c: f64,
    pub p_m: f64,
    pub eta_m: f64,
    pub ts: usize,
    pub selection: Selection,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            pop_size: 50,
            p_c: 0.5,
            eta_c: 15.0,
            p_m: 0.01,
            eta_m: 15.0,
            ts: 2,
            selection: Selection::Tournament,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.pop_size < 2 {
            return bad("population size must be at least 2");
        }
        if !(0.0..=1.0).contains(&self.p_c) || !(0.0..=1.0).contains(&self.p_m) {
            return bad("crossover and mutation rates must lie in [0, 1]");
        }
        if !(self.eta_c > 0.0) || !(self.eta_m > 0.0) {
            return bad("distribution indices must be positive");
        }
        if self.ts < 2 {
            return bad("tournament size must be at least 2");
        }
        if let Selection::Rank(s) = self.selection {
            s.validate()?;
        }
        if let Selection::Fps { sigma_scaling: Some(c) } = self.selection {
            if !(c >= 0.0) {
                return bad("sigma scaling constant must be non-negative");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GaOutcome {
    pub stats: RunStats,
    pub best: RealIndividual,
}

struct Mating {
    scores: Option<Vec<f64>>,
}

impl Mating {
    fn prepare(sel: Selection, fitness: &[f64]) -> Self {
        let scores = match sel {
            Selection::Fps { sigma_scaling } => {
                let s = fps_scores(fitness);
                Some(match sigma_scaling {
                    Some(c) => sigma_scale(&s, c),
                    None => s,
                })
            }
            _ => None,
        };
        Self { scores }
    }

    fn pick(&self, cfg: &GaConfig, fitness: &[f64], rng: &mut Rng) -> Result<usize> {
        match cfg.selection {
            Selection::Tournament => select_tournament(fitness, cfg.ts, rng),
            Selection::Fps { .. } => select_fps(self.scores.as_deref().unwrap_or(&[]), rng),
            Selection::Rank(scheme) => select_rank(fitness, scheme, rng),
        }
    }
}

/// Polynomial mutation of every parent except `elite`, with mutation
/// scale set by the initialization widths. Entry `i` is the mutated genome,
/// or `None` when nothing changed.
pub fn mutate_parents(
    pop: &[RealIndividual],
    elite: usize,
    space: &SearchSpace,
    config: &GaConfig,
    rng: &mut Rng,
) -> Vec<Option<Vec<f64>>> {
    let (lo, hi) = (space.init_lo(), space.init_hi());
    pop.iter()
        .enumerate()
        .map(|(i, ind)| {
            if i == elite {
                return None;
            }
            let (mut g, changed) = polynomial_mutation(&ind.genome, lo, hi, config.p_m, config.eta_m, rng);
            changed.then(|| {
                space.apply_boundary_in_place(&mut g);
                g
            })
        })
        .collect()
}

fn argmin(fitness: &[f64]) -> usize {
    let mut best = 0;
    for (i, f) in fitness.iter().enumerate() {
        if *f < fitness[best] {
            best = i;
        }
    }
    best
}

/// Runs the GA until `budget` objective evaluations have been spent.
///
/// Each generation: N offspring from mating selection and SBX, polynomial
/// mutation of the parent population (incumbent best exempt), then N
/// survivors by tournament over the combined pool, with the pool's best
/// reinstated over the worst survivor if it was not drawn.
pub fn ga_run(
    objective: &dyn Objective,
    space: &SearchSpace,
    config: &GaConfig,
    budget: u64,
    rng: &mut Rng,
) -> Result<GaOutcome> {
    config.validate()?;
    let n = config.pop_size;
    if budget < n as u64 {
        return Err(Error::InvalidParameter(format!(
            "budget {budget} is smaller than the population size {n}"
        )));
    }
    let mut stats = RunStats::new();
    let mut evals = 0u64;
    let mut pop: Vec<RealIndividual> = (0..n)
        .map(|_| {
            let genome = space.sample_uniform(rng);
            let fitness = objective.evaluate(&genome);
            evals += 1;
            RealIndividual { genome, fitness }
        })
        .collect();
    let mut generation = 1;
    let best_now = |p: &[RealIndividual]| p.iter().map(|i| i.fitness).fold(f64::INFINITY, f64::min);
    stats.record(generation, evals, best_now(&pop));

    let stagnant = config.p_c == 0.0 && config.p_m == 0.0;
    while evals < budget && !stagnant {
        generation += 1;
        let fitness: Vec<f64> = pop.iter().map(|i| i.fitness).collect();
        let elite = argmin(&fitness);
        let mating = Mating::prepare(config.selection, &fitness);

        // (genome, known fitness if unchanged)
        let mut offspring: Vec<(Vec<f64>, Option<f64>)> = Vec::with_capacity(n + 1);
        while offspring.len() < n {
            let a = mating.pick(config, &fitness, rng)?;
            let b = mating.pick(config, &fitness, rng)?;
            if rng.bernoulli(config.p_c) {
                let (o1, o2) = sbx_crossover(&pop[a].genome, &pop[b].genome, config.eta_c, rng);
                offspring.push((o1, None));
                offspring.push((o2, None));
            } else {
                offspring.push((pop[a].genome.clone(), Some(pop[a].fitness)));
                offspring.push((pop[b].genome.clone(), Some(pop[b].fitness)));
            }
        }
        offspring.truncate(n);

        let mutated_parents = mutate_parents(&pop, elite, space, config, rng);
        for (g, known) in offspring.iter_mut() {
            if known.is_none() {
                space.apply_boundary_in_place(g);
            }
        }

        let mut pool: Vec<RealIndividual> = Vec::with_capacity(2 * n);
        for (i, m) in mutated_parents.into_iter().enumerate() {
            match m {
                Some(genome) if evals < budget => {
                    let fitness = objective.evaluate(&genome);
                    evals += 1;
                    pool.push(RealIndividual { genome, fitness });
                }
                // Unevaluated mutants revert to their parent.
                _ => pool.push(pop[i].clone()),
            }
        }
        for (genome, known) in offspring {
            match known {
                Some(fitness) => pool.push(RealIndividual { genome, fitness }),
                None if evals < budget => {
                    let fitness = objective.evaluate(&genome);
                    evals += 1;
                    pool.push(RealIndividual { genome, fitness });
                }
                None => {}
            }
        }

        let pool_fit: Vec<f64> = pool.iter().map(|i| i.fitness).collect();
        let pool_best = argmin(&pool_fit);
        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        for _ in 0..n {
            chosen.push(select_tournament(&pool_fit, config.ts, rng)?);
        }
        if !chosen.contains(&pool_best) {
            let mut worst = 0;
            for (k, &c) in chosen.iter().enumerate() {
                if pool_fit[c] > pool_fit[chosen[worst]] {
                    worst = k;
                }
            }
            chosen[worst] = pool_best;
        }
        pop = chosen.into_iter().map(|c| pool[c].clone()).collect();
        stats.record(generation, evals, best_now(&pop));
    }

    let best = pop[argmin(&pop.iter().map(|i| i.fitness).collect::<Vec<_>>())].clone();
    Ok(GaOutcome { stats, best })
}
