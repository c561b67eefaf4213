//! Multi-objective optimization: Pareto utilities, the polyploid GA,
//! NSGA-II and the shape-aware cell diversity metric.

pub mod diversity;
pub mod nsga2;
pub mod pareto;
pub mod polyploid;

pub use diversity::{diversity_metric2, CellPartition};
pub use nsga2::{nsga2_run, Nsga2Config};
pub use pareto::{dominates, domination_counts, nondominated_set, weakly_dominates, Dominance};
pub use polyploid::{extract_population, polyploid_run, ExtractionStats, PolyploidConfig, PolyploidVector};

use crate::benchmarks::Dtlz;

/// A vector-valued objective, every component minimized.
pub trait MultiObjective: Sync {
    fn n_obj(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> Vec<f64>;
}

impl MultiObjective for Dtlz {
    fn n_obj(&self) -> usize {
        Dtlz::n_obj(self)
    }

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.value(x)
    }
}

/// Called after each generation with the evaluation count and the
/// objective vectors of the current population.
pub type Observer<'a> = dyn FnMut(u64, &[Vec<f64>]) + 'a;
