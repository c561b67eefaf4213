//! Real-coded single-objective genetic algorithm.
//!
//! Selection schemes live in [`selection`], the SBX and polynomial-mutation
//! operators (shared with the multi-objective algorithms) in [`operators`],
//! and the generational loop in [`run`].

pub mod operators;
pub mod run;
pub mod selection;

pub use operators::{poly_delta, polynomial_mutation, sbx_crossover, sbx_with_draws};
pub use run::{ga_run, mutate_parents, GaConfig, GaOutcome, RealIndividual};
pub use selection::{select_fps, select_rank, select_tournament, RankScheme, Selection};
