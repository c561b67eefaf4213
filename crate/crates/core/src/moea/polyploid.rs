//! Polyploid multi-objective GA: each solution vector carries `d`
//! chromosomes, of which only the dominant allele set (DAS) is expressed.

use super::pareto::{domination_counts, nondominated_set};
use super::{MultiObjective, Observer};
use crate::benchmarks::distance_to_front;
use crate::benchmarks::FrontShape;
use crate::error::{Error, Result};
use crate::ga::operators::{polynomial_mutation, sbx_crossover};
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct PolyploidVector {
    /// `chromosomes[0]` is the DAS; the rest are the `d - 1` redundant ones.
    pub chromosomes: Vec<Vec<f64>>,
    pub objectives: Vec<f64>,
}

impl PolyploidVector {
    pub fn das(&self) -> &[f64] {
        &self.chromosomes[0]
    }

    pub fn ploidy(&self) -> usize {
        self.chromosomes.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyploidConfig {
    pub pop_size: usize,
    pub ploidy: usize,
    pub p_c: f64,
    pub eta_c: f64,
    /// Per-component mutation rate; `None` means `1 / n`.
    pub p_m: Option<f64>,
    pub eta_m: f64,
}

impl Default for PolyploidConfig {
    fn default() -> Self {
        Self {
            pop_size: 100,
            ploidy: 2,
            p_c: 1.0,
            eta_c: 20.0,
            p_m: None,
            eta_m: 15.0,
        }
    }
}

impl PolyploidConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::InvalidParameter("population size must be at least 2".into()));
        }
        if self.ploidy == 0 {
            return Err(Error::InvalidParameter("ploidy must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.p_c) || self.p_m.is_some_and(|p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidParameter("rates must lie in [0, 1]".into()));
        }
        if !(self.eta_c > 0.0 && self.eta_m > 0.0) {
            return Err(Error::InvalidParameter("distribution indices must be positive".into()));
        }
        Ok(())
    }

    pub fn mutation_rate(&self, n_vars: usize) -> f64 {
        self.p_m.unwrap_or(1.0 / n_vars as f64)
    }
}

/// One allele per locus, drawn uniformly from the parent's chromosomes.
pub fn representative(parent: &[Vec<f64>], rng: &mut Rng) -> Vec<f64> {
    let n = parent[0].len();
    (0..n).map(|i| parent[rng.index(parent.len())][i]).collect()
}

/// Builds one child's chromosomes (DAS first) from two parents. Decision
/// variables are confined to the unit box.
pub fn polyploid_mate(
    p1: &[Vec<f64>],
    p2: &[Vec<f64>],
    config: &PolyploidConfig,
    rng: &mut Rng,
) -> Vec<Vec<f64>> {
    let d = p1.len();
    let n = p1[0].len();
    let r1 = representative(p1, rng);
    let r2 = representative(p2, rng);
    let mut das = if rng.bernoulli(config.p_c) {
        sbx_crossover(&r1, &r2, config.eta_c, rng).0
    } else {
        r1
    };
    let (lo, hi) = (vec![0.0; n], vec![1.0; n]);
    das = polynomial_mutation(&das, &lo, &hi, config.mutation_rate(n), config.eta_m, rng).0;
    for v in das.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
    let mut child = Vec::with_capacity(d);
    child.push(das);
    for k in rng.sample_distinct(2 * d, d - 1) {
        let src = if k < d { &p1[k] } else { &p2[k - d] };
        child.push(src.clone());
    }
    child
}

/// Random pairing of the mating pool without replacement. An odd leftover
/// pairs with another random member; a pool of one pairs with itself.
pub fn pair_pool(pool: &[usize], rng: &mut Rng) -> Vec<(usize, usize)> {
    let mut order = pool.to_vec();
    rng.shuffle(&mut order);
    let mut pairs: Vec<(usize, usize)> = order.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    if order.len() % 2 == 1 {
        let last = order[order.len() - 1];
        let mate = if order.len() == 1 {
            last
        } else {
            order[rng.index(order.len() - 1)]
        };
        pairs.push((last, mate));
    }
    pairs
}

/// Indices of the `n` members with the lowest domination counts, ties
/// broken uniformly at random.
pub fn survivors(objectives: &[Vec<f64>], n: usize, rng: &mut Rng) -> Vec<usize> {
    let counts = domination_counts(objectives);
    let mut order: Vec<usize> = (0..objectives.len()).collect();
    rng.shuffle(&mut order);
    order.sort_by_key(|&i| counts[i]);
    order.truncate(n);
    order
}

fn random_vector(d: usize, n: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
    (0..d).map(|_| (0..n).map(|_| rng.uniform()).collect()).collect()
}

/// Runs the polyploid GA on a problem over the unit box until `budget`
/// evaluations are spent. `observe` sees the population after the initial
/// evaluation and after every generation.
pub fn polyploid_run(
    problem: &dyn MultiObjective,
    n_vars: usize,
    config: &PolyploidConfig,
    budget: u64,
    rng: &mut Rng,
    observe: &mut Observer<'_>,
) -> Result<Vec<PolyploidVector>> {
    config.validate()?;
    let n = config.pop_size;
    if budget < n as u64 {
        return Err(Error::InvalidParameter(format!(
            "budget {budget} is smaller than the population size {n}"
        )));
    }
    let mut evals = 0u64;
    let mut pop: Vec<PolyploidVector> = (0..n)
        .map(|_| {
            let chromosomes = random_vector(config.ploidy, n_vars, rng);
            let objectives = problem.evaluate(&chromosomes[0]);
            evals += 1;
            PolyploidVector { chromosomes, objectives }
        })
        .collect();
    observe(evals, &objective_matrix(&pop));

    while evals < budget {
        let objs = objective_matrix(&pop);
        let pool = nondominated_set(&objs);
        let mut combined = pop;
        for (a, b) in pair_pool(&pool, rng) {
            if evals >= budget {
                break;
            }
            let chromosomes = polyploid_mate(&combined[a].chromosomes, &combined[b].chromosomes, config, rng);
            let objectives = problem.evaluate(&chromosomes[0]);
            evals += 1;
            combined.push(PolyploidVector { chromosomes, objectives });
        }
        let keep = survivors(&objective_matrix(&combined), n, rng);
        let mut slots: Vec<Option<PolyploidVector>> = combined.into_iter().map(Some).collect();
        pop = keep.into_iter().map(|i| slots[i].take().expect("unique index")).collect();
        observe(evals, &objective_matrix(&pop));
    }
    Ok(pop)
}

pub fn objective_matrix(pop: &[PolyploidVector]) -> Vec<Vec<f64>> {
    pop.iter().map(|p| p.objectives.clone()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionStats {
    pub avg_distance_original: f64,
    pub avg_distance_extracted: f64,
    /// Percentage of the `N * d` extracted solutions dominated by another
    /// extracted solution.
    pub pct_dominated: f64,
}

/// Evaluates every chromosome of every vector as a standalone solution.
pub fn extract_population(
    pop: &[PolyploidVector],
    problem: &dyn MultiObjective,
    shape: FrontShape,
) -> Result<ExtractionStats> {
    if pop.is_empty() {
        return Err(Error::Empty("population"));
    }
    let avg = |objs: &[Vec<f64>]| objs.iter().map(|f| distance_to_front(shape, f)).sum::<f64>() / objs.len() as f64;
    let original = objective_matrix(pop);
    let extracted: Vec<Vec<f64>> = pop
        .iter()
        .flat_map(|p| p.chromosomes.iter().map(|c| problem.evaluate(c)))
        .collect();
    let nd = nondominated_set(&extracted).len();
    Ok(ExtractionStats {
        avg_distance_original: avg(&original),
        avg_distance_extracted: avg(&extracted),
        pct_dominated: 100.0 * (extracted.len() - nd) as f64 / extracted.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{Dtlz, DtlzKind};

    #[test]
    fn identical_parents_without_variation_reproduce() {
        let p = vec![vec![0.25, 0.5, 0.75]; 3];
        let cfg = PolyploidConfig { ploidy: 3, p_c: 0.0, p_m: Some(0.0), ..Default::default() };
        let child = polyploid_mate(&p, &p, &cfg, &mut Rng::new(1));
        assert_eq!(child, p);
    }

    #[test]
    fn representative_picks_are_uniform() {
        let d = 4;
        let parent: Vec<Vec<f64>> = (0..d).map(|k| vec![k as f64; 3]).collect();
        let mut rng = Rng::new(3);
        let mut counts = vec![0usize; d];
        for _ in 0..10_000 {
            for v in representative(&parent, &mut rng) {
                counts[v as usize] += 1;
            }
        }
        let expected = 30_000.0 / d as f64;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 3 degrees of freedom, 99.9th percentile 16.27
        assert!(chi2 < 16.27, "{counts:?}");
    }

    #[test]
    fn redundant_chromosomes_come_from_parents() {
        let p1: Vec<Vec<f64>> = (0..3).map(|k| vec![0.1 * k as f64; 4]).collect();
        let p2: Vec<Vec<f64>> = (0..3).map(|k| vec![0.5 + 0.1 * k as f64; 4]).collect();
        let cfg = PolyploidConfig { ploidy: 3, ..Default::default() };
        let mut rng = Rng::new(9);
        for _ in 0..50 {
            let child = polyploid_mate(&p1, &p2, &cfg, &mut rng);
            assert_eq!(child.len(), 3);
            for c in &child[1..] {
                assert!(p1.contains(c) || p2.contains(c));
            }
            assert!(child[0].iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn pairing_covers_pool() {
        let mut rng = Rng::new(2);
        assert_eq!(pair_pool(&[7], &mut rng), vec![(7, 7)]);
        let pairs = pair_pool(&[0, 1, 2, 3, 4], &mut rng);
        assert_eq!(pairs.len(), 3);
        let mut firsts: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).take(5).collect();
        firsts.sort_unstable();
        assert_eq!(firsts, vec![0, 1, 2, 3, 4]);
        assert_ne!(pairs[2].0, pairs[2].1);
    }

    #[test]
    fn survival_prefers_low_counts() {
        let objs = vec![vec![3.0, 3.0], vec![1.0, 1.0], vec![2.0, 2.0], vec![0.5, 4.0]];
        let keep = survivors(&objs, 2, &mut Rng::new(0));
        let mut keep = keep;
        keep.sort_unstable();
        assert_eq!(keep, vec![1, 3]);
    }

    #[test]
    fn monoploid_extraction_matches_original() {
        let problem = Dtlz::new(DtlzKind::Dtlz2, 12, 3).unwrap();
        let cfg = PolyploidConfig { pop_size: 20, ploidy: 1, ..Default::default() };
        let pop = polyploid_run(&problem, 12, &cfg, 400, &mut Rng::new(5), &mut |_, _| {}).unwrap();
        let s = extract_population(&pop, &problem, FrontShape::Spherical).unwrap();
        assert_eq!(s.avg_distance_original, s.avg_distance_extracted);
        let nd = nondominated_set(&objective_matrix(&pop)).len();
        assert!((s.pct_dominated - 100.0 * (20 - nd) as f64 / 20.0).abs() < 1e-12);
    }

    #[test]
    fn front_copies_have_zero_distance() {
        let problem = Dtlz::new(DtlzKind::Dtlz2, 5, 2).unwrap();
        let das = vec![0.3, 0.5, 0.5, 0.5, 0.5];
        let v = PolyploidVector {
            chromosomes: vec![das.clone(); 3],
            objectives: problem.value(&das),
        };
        let s = extract_population(&[v], &problem, FrontShape::Spherical).unwrap();
        assert!(s.avg_distance_original < 1e-12 && s.avg_distance_extracted < 1e-12);
    }

    #[test]
    fn run_spends_budget_exactly() {
        let problem = Dtlz::new(DtlzKind::Dtlz2, 12, 3).unwrap();
        let cfg = PolyploidConfig { pop_size: 30, ploidy: 2, ..Default::default() };
        let mut last = 0;
        let mut prev_best = f64::INFINITY;
        let pop = polyploid_run(&problem, 12, &cfg, 1_234, &mut Rng::new(5), &mut |e, objs| {
            last = e;
            assert_eq!(objs.len(), 30);
            prev_best = prev_best.min(objs.iter().map(|f| distance_to_front(FrontShape::Spherical, f)).fold(f64::INFINITY, f64::min));
        })
        .unwrap();
        assert_eq!(last, 1_234);
        assert_eq!(pop.len(), 30);
        assert!(pop.iter().all(|p| p.ploidy() == 2));
    }
}
