//! Run configuration, mirrored one-to-one by the JSON config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sputnik_moea::Strategy;

use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "nsga2")]
    Nsga2,
    #[serde(rename = "eps-moea")]
    EpsMoea,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Nsga2 => "nsga2",
            Algorithm::EpsMoea => "eps-moea",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "nsga2" => Ok(Algorithm::Nsga2),
            "eps-moea" => Ok(Algorithm::EpsMoea),
            other => Err(BenchError::Config(format!(
                "unknown algorithm {other:?}, expected nsga2 | eps-moea"
            ))),
        }
    }
}

/// Problem instance: either a JSON file on disk or generator parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Path {
        path: PathBuf,
    },
    Generate {
        vms: usize,
        components: usize,
        public_fraction: f64,
        instance_seed: u64,
    },
}

fn default_exploration_floor() -> f64 {
    0.10
}

fn default_crossover_probability() -> f64 {
    0.9
}

fn default_mutation_probability() -> f64 {
    0.9
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub strategy: Strategy,
    pub population_size: usize,
    pub generations: usize,
    #[serde(default = "default_mutation_probability")]
    pub mutation_probability: f64,
    #[serde(default = "default_crossover_probability")]
    pub crossover_probability: f64,
    #[serde(default = "default_exploration_floor")]
    pub exploration_floor: f64,
    /// Epsilon-box sides in raw objective units, eps-moea only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<[f64; 2]>,
    pub instance: InstanceSource,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.population_size < 1 {
            return Err(BenchError::Config("population_size must be >= 1".into()));
        }
        if self.generations < 1 {
            return Err(BenchError::Config("generations must be >= 1".into()));
        }
        for (name, p) in [
            ("mutation_probability", self.mutation_probability),
            ("crossover_probability", self.crossover_probability),
            ("exploration_floor", self.exploration_floor),
        ] {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(BenchError::Config(format!(
                    "{name} must be in [0, 1], got {p}"
                )));
            }
        }
        if self.algorithm == Algorithm::EpsMoea {
            match self.epsilon {
                None => {
                    return Err(BenchError::Config(
                        "eps-moea requires an epsilon pair".into(),
                    ))
                }
                Some(eps) => {
                    if eps.iter().any(|e| !e.is_finite() || *e <= 0.0) {
                        return Err(BenchError::Config(format!(
                            "epsilon must be positive reals, got {eps:?}"
                        )));
                    }
                }
            }
        }
        if let InstanceSource::Generate {
            vms,
            components,
            public_fraction,
            ..
        } = &self.instance
        {
            if *vms < 1 || *components < 1 {
                return Err(BenchError::Config(
                    "generated instances need vms >= 1 and components >= 1".into(),
                ));
            }
            if !(0.0..=1.0).contains(public_fraction) {
                return Err(BenchError::Config(format!(
                    "public_fraction must be in [0, 1], got {public_fraction}"
                )));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            BenchError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let config: RunConfig = serde_json::from_str(&text).map_err(|e| {
            BenchError::Config(format!("cannot parse config {}: {e}", path.display()))
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Same run with another strategy.
    pub fn with_strategy(&self, strategy: Strategy) -> Self {
        let mut out = self.clone();
        out.strategy = strategy;
        out
    }

    /// Same run with another host algorithm.
    pub fn with_algorithm(&self, algorithm: Algorithm) -> Self {
        let mut out = self.clone();
        out.algorithm = algorithm;
        out
    }

    /// Same run with another seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut out = self.clone();
        out.seed = seed;
        out
    }
}
