//! Multi-objective evolutionary optimization with history-driven adaptive
//! selection of mutation operators.
//!
//! The crate is organized around a generic evolutionary engine and a
//! hyper-heuristic that sits between the engine and a pool of mutation
//! operators:
//!
//! * [`objective`], [`population`], [`operator`] — the population model:
//!   objective vectors under a minimization convention, Pareto dominance,
//!   and the pluggable operator/evaluator interfaces.
//! * [`sorting`] — non-dominated sorting and crowding distance.
//! * [`nsga2`] — one elitist (mu + lambda) generational step.
//! * [`epsilon`] — a steady-state host with an epsilon-dominance archive.
//! * [`selector`] — the Sputnik selector: per-operator impact credits and
//!   the Random / Elitist / Caste selection strategies with an exploration
//!   floor.
//! * [`cloud`] — the hybrid-cloud placement case study: instances, genomes,
//!   cost/latency objectives, the mutation operator set, and JSON I/O.
//! * [`indicators`] — exact 2-D hypervolume and convergence metrics.
//!
//! # Example
//!
//! Evolve placements on a generated instance with the caste strategy:
//!
//! ```
//! use std::sync::Arc;
//! use rand::SeedableRng;
//! use sputnik_moea::{
//!     cloud, nsga2_generation, Evaluator, GenerationConfig, Individual,
//!     OperatorSelector, Population, RunningBounds, SputnikSelector, Strategy,
//! };
//!
//! let instance = Arc::new(cloud::random_instance(8, 10, 0.5, 1));
//! let evaluator = cloud::CloudEvaluator::new(instance.clone());
//! let mut selector =
//!     SputnikSelector::new(cloud::operator_set(&instance), Strategy::Caste, 0.1, 42)?;
//! let crossover = cloud::crossover();
//! let config = GenerationConfig {
//!     crossover_probability: 0.9,
//!     mutation_probability: 0.9,
//! };
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
//! let mut bounds = RunningBounds::new(2);
//! let mut population = Population::new(
//!     (0..12)
//!         .map(|_| {
//!             let genome = cloud::random_genome(&instance, &mut rng);
//!             let objectives = evaluator.evaluate(&genome).unwrap();
//!             bounds.update(&objectives);
//!             Individual::evaluated(genome, objectives)
//!         })
//!         .collect(),
//! );
//! for _ in 0..5 {
//!     population = nsga2_generation(
//!         &population, &mut selector, &crossover, &evaluator,
//!         &config, &mut bounds, &mut rng,
//!     )?;
//!     selector.end_generation();
//! }
//! assert_eq!(population.len(), 12);
//! assert_eq!(population.generation_index, 5);
//! # Ok::<(), sputnik_moea::MoeaError>(())
//! ```

pub mod cloud;
pub mod epsilon;
pub mod error;
pub mod indicators;
pub mod nsga2;
pub mod objective;
pub mod operator;
pub mod population;
pub mod selector;
pub mod sorting;

pub use error::MoeaError;
pub use nsga2::{nsga2_generation, GenerationConfig};
pub use objective::ObjectiveVector;
pub use operator::{
    CrossoverOperator, Evaluator, OperatorHandle, OperatorPool, OperatorSelector, RunningBounds,
};
pub use population::{Individual, Population};
pub use selector::{score_of, SputnikSelector, Strategy};
