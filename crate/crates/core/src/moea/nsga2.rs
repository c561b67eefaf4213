//! NSGA-II baseline: fast nondominated sorting, crowding distance and a
//! binary crowded tournament, with the same variation operators as the
//! polyploid GA.

use super::pareto::strictly_dominates;
use super::{MultiObjective, Observer};
use crate::error::{Error, Result};
use crate::ga::operators::{polynomial_mutation, sbx_crossover};
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Nsga2Config {
    pub pop_size: usize,
    pub p_c: f64,
    pub eta_c: f64,
    /// `None` means `1 / n`.
    pub p_m: Option<f64>,
    pub eta_m: f64,
}

impl Default for Nsga2Config {
    fn default() -> Self {
        Self {
            pop_size: 100,
            p_c: 1.0,
            eta_c: 20.0,
            p_m: None,
            eta_m: 15.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
}

/// Fronts in order; each front lists member indices ascending.
pub fn fast_nondominated_sort(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if strictly_dominates(&points[i], &points[j]) {
                dominated[i].push(j);
                count[j] += 1;
            } else if strictly_dominates(&points[j], &points[i]) {
                dominated[j].push(i);
                count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each member of one front, in the front's order.
/// Boundary members of every objective get infinity.
pub fn crowding_distance(points: &[Vec<f64>], front: &[usize]) -> Vec<f64> {
    let k = front.len();
    let mut dist = vec![0.0; k];
    if k <= 2 {
        return vec![f64::INFINITY; k];
    }
    let m = points[front[0]].len();
    for obj in 0..m {
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| points[front[a]][obj].total_cmp(&points[front[b]][obj]));
        let lo = points[front[order[0]]][obj];
        let hi = points[front[order[k - 1]]][obj];
        dist[order[0]] = f64::INFINITY;
        dist[order[k - 1]] = f64::INFINITY;
        if hi > lo {
            for w in 1..k - 1 {
                let gap = points[front[order[w + 1]]][obj] - points[front[order[w - 1]]][obj];
                dist[order[w]] += gap / (hi - lo);
            }
        }
    }
    dist
}

/// Rank (front index) and crowding distance for every member.
fn rank_and_crowd(points: &[Vec<f64>]) -> (Vec<usize>, Vec<f64>) {
    let mut rank = vec![0; points.len()];
    let mut crowd = vec![0.0; points.len()];
    for (r, front) in fast_nondominated_sort(points).iter().enumerate() {
        for (&i, d) in front.iter().zip(crowding_distance(points, front)) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    (rank, crowd)
}

fn crowded_tournament(rank: &[usize], crowd: &[f64], rng: &mut Rng) -> usize {
    let a = rng.index(rank.len());
    let b = rng.index(rank.len());
    if rank[a] != rank[b] {
        return if rank[a] < rank[b] { a } else { b };
    }
    if crowd[a] != crowd[b] {
        return if crowd[a] > crowd[b] { a } else { b };
    }
    if rng.bernoulli(0.5) {
        a
    } else {
        b
    }
}

/// Runs NSGA-II over the unit box until `budget` evaluations are spent.
pub fn nsga2_run(
    problem: &dyn MultiObjective,
    n_vars: usize,
    config: &Nsga2Config,
    budget: u64,
    rng: &mut Rng,
    observe: &mut Observer<'_>,
) -> Result<Vec<Solution>> {
    let n = config.pop_size;
    if n < 2 {
        return Err(Error::InvalidParameter("population size must be at least 2".into()));
    }
    if budget < n as u64 {
        return Err(Error::InvalidParameter(format!(
            "budget {budget} is smaller than the population size {n}"
        )));
    }
    let p_m = config.p_m.unwrap_or(1.0 / n_vars as f64);
    let (lo, hi) = (vec![0.0; n_vars], vec![1.0; n_vars]);
    let mut evals = 0u64;
    let eval = |x: Vec<f64>, evals: &mut u64| {
        *evals += 1;
        let objectives = problem.evaluate(&x);
        Solution { x, objectives }
    };

    let mut pop: Vec<Solution> = (0..n)
        .map(|_| eval((0..n_vars).map(|_| rng.uniform()).collect(), &mut evals))
        .collect();
    let objs = |p: &[Solution]| p.iter().map(|s| s.objectives.clone()).collect::<Vec<_>>();
    observe(evals, &objs(&pop));

    while evals < budget {
        let (rank, crowd) = rank_and_crowd(&objs(&pop));
        let mut offspring = Vec::with_capacity(n);
        while offspring.len() < n && evals < budget {
            let a = crowded_tournament(&rank, &crowd, rng);
            let b = crowded_tournament(&rank, &crowd, rng);
            let (c1, c2) = if rng.bernoulli(config.p_c) {
                sbx_crossover(&pop[a].x, &pop[b].x, config.eta_c, rng)
            } else {
                (pop[a].x.clone(), pop[b].x.clone())
            };
            for c in [c1, c2] {
                if offspring.len() >= n || evals >= budget {
                    break;
                }
                let mut m = polynomial_mutation(&c, &lo, &hi, p_m, config.eta_m, rng).0;
                for v in m.iter_mut() {
                    *v = v.clamp(0.0, 1.0);
                }
                offspring.push(eval(m, &mut evals));
            }
        }
        let mut combined = pop;
        combined.extend(offspring);
        let points = objs(&combined);
        let mut next: Vec<usize> = Vec::with_capacity(n);
        for front in fast_nondominated_sort(&points) {
            if next.len() + front.len() <= n {
                next.extend(&front);
                continue;
            }
            let d = crowding_distance(&points, &front);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
            next.extend(order.into_iter().take(n - next.len()).map(|k| front[k]));
            break;
        }
        let mut slots: Vec<Option<Solution>> = combined.into_iter().map(Some).collect();
        pop = next.into_iter().map(|i| slots[i].take().expect("unique index")).collect();
        observe(evals, &objs(&pop));
    }
    Ok(pop)
}
