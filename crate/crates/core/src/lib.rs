//! Student result grouping.
//!
//! A cohort of students must be split into groups so that each group's result
//! sheet stays legible: the union of courses taken by a group may not exceed a
//! fixed number of columns for courses introduced this year ("new") and for
//! courses introduced earlier ("old"). The crate provides the domain model, a
//! weighted penalty fitness, two greedy orderings (hardest-first and random),
//! a Max-Min ant colony optimizer and a genetic algorithm.
//!
//! ```
//! use srg_core::{constructive, fitness, parse_instance, FitnessConfig};
//!
//! let data = "student,course,year\ns1,CMP401,4\ns1,CMP201,2\ns2,CMP401,4\n";
//! let instance = parse_instance(data.as_bytes(), None).unwrap();
//! let config = FitnessConfig::default();
//! let grouping = constructive::hfo_solve(&instance, &config);
//! let report = fitness::evaluate(&instance, &grouping, &config);
//! assert_eq!(report.group_count, 1);
//! ```

pub mod aco;
pub mod constructive;
pub mod error;
pub mod fitness;
pub mod ga;
pub mod generate;
pub mod grouping;
pub mod model;
pub mod parse;
pub mod validate;

pub use aco::{AcoConfig, AcoOutcome, IterationBest, PheromoneMatrix};
pub use error::{GroupingError, ModelError, ParseError};
pub use fitness::{FitnessConfig, FitnessMode, PenaltyBreakdown};
pub use ga::{CrossoverKind, GaConfig, GaOutcome, GenerationBest, Individual, SelectionKind};
pub use generate::{generate_instance, GeneratorSpec};
pub use grouping::{Grouping, GroupingFile};
pub use model::{
    course_profile, ColumnLimits, ColumnMode, Course, CourseKind, Instance, Registration, Student,
};
pub use parse::{load_instance, parse_instance, parse_named, write_instance};
pub use validate::{check_constraints, ConstraintReport, Violation};

/// Seeded generator used by every stochastic routine. The ChaCha8 stream is
/// stable across `rand` releases.
pub type SolverRng = rand_chacha::ChaCha8Rng;

/// Creates the generator for a seed.
pub fn rng_from_seed(seed: u64) -> SolverRng {
    use rand::SeedableRng;
    SolverRng::seed_from_u64(seed)
}
