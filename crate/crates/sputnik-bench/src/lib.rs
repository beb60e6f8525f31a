//! Experiment runner for strategy comparisons on the cloud placement
//! problem: seeded runs across {random, elitist, caste} and the two hosts,
//! CSV traces, summary statistics, and plot-ready output.

pub mod config;
pub mod plot;
pub mod runner;
pub mod summary;
pub mod trace;

pub use config::{Algorithm, InstanceSource, RunConfig};
pub use runner::{load_instance, run_experiment, stagnation_run, RunOutput};
pub use summary::{compare_strategies, SummaryRow};
pub use trace::{RunTrace, TraceRow};

use thiserror::Error;

/// Harness errors, split by the exit code they map to.
#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime failure: {0}")]
    Runtime(String),
}

impl BenchError {
    /// CLI exit code: 2 for configuration errors, 3 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 2,
            BenchError::Runtime(_) => 3,
        }
    }
}

impl From<sputnik_moea::MoeaError> for BenchError {
    fn from(err: sputnik_moea::MoeaError) -> Self {
        match err {
            sputnik_moea::MoeaError::Config(msg) => BenchError::Config(msg),
            sputnik_moea::MoeaError::Evaluation(msg) => BenchError::Runtime(msg),
        }
    }
}
