//! Metaheuristic optimizers and experiment building blocks.
//!
//! The crate is organised around a handful of independent subsystems:
//!
//! - [`space`], [`rng`], [`stats`]: search-space definitions, seeded
//!   randomness and per-run statistics shared by every optimizer.
//! - [`benchmarks`]: single-objective test functions and the DTLZ1-4 suite.
//! - [`ga`]: a real-coded genetic algorithm (SBX, polynomial mutation,
//!   tournament/FPS/rank selection, elitism).
//! - [`moea`]: Pareto machinery, the polyploid multi-objective GA, NSGA-II
//!   and the shape-aware cell diversity metric.
//! - [`pso`]: particle swarms with gbest, lbest-ring and clubs-based
//!   neighbourhoods.
//! - [`motor`]: induction-motor simulation and the current-error
//!   identification fitness.
//! - [`linesearch`]: the axis-step local search baseline.
//! - [`schema`]: the schema growth calculator.
//!
//! All optimizers minimize. Maximization problems are negated by the caller.

pub mod benchmarks;
pub mod error;
pub mod ga;
pub mod linesearch;
pub mod moea;
pub mod motor;
pub mod objective;
pub mod pso;
pub mod rng;
pub mod schema;
pub mod space;
pub mod stats;

pub use error::{Error, Result};
pub use objective::Objective;
pub use rng::Rng;
pub use space::{BoundaryPolicy, SearchSpace};
pub use stats::{Checkpoint, RunStats, RunSummary};
