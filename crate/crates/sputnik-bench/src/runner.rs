//! Seeded experiment execution for both host algorithms.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sputnik_moea::cloud::{self, CloudEvaluator, CloudInstance, PlacementGenome};
use sputnik_moea::epsilon::{epsilon_moea_generation, EpsilonMoeaState};
use sputnik_moea::indicators::{hypervolume_2d, normalize_front, NORMALIZED_REFERENCE};
use sputnik_moea::sorting::fast_nondominated_sort;
use sputnik_moea::{
    nsga2_generation, CrossoverOperator, GenerationConfig, Individual, ObjectiveVector,
    OperatorSelector, Population, RunningBounds, SputnikSelector,
};

use crate::config::{Algorithm, InstanceSource, RunConfig};
use crate::trace::{RunTrace, TraceRow};
use crate::BenchError;

/// One finished run: its identity and its per-generation trace.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub algorithm: Algorithm,
    pub strategy: sputnik_moea::Strategy,
    pub seed: u64,
    pub trace: RunTrace,
    /// Stagnation runs only: true when the hard cap stopped the run before
    /// the hypervolume stagnated.
    pub reached_cap: bool,
}

/// Loads or generates the configured problem instance.
pub fn load_instance(source: &InstanceSource) -> Result<CloudInstance, BenchError> {
    match source {
        InstanceSource::Path { path } => CloudInstance::load(path).map_err(|e| {
            BenchError::Config(format!("invalid instance file {}: {e}", path.display()))
        }),
        InstanceSource::Generate {
            vms,
            components,
            public_fraction,
            instance_seed,
        } => Ok(cloud::random_instance(
            *vms,
            *components,
            *public_fraction,
            *instance_seed,
        )),
    }
}

enum Host {
    Nsga2(Population<PlacementGenome>),
    EpsMoea(EpsilonMoeaState<PlacementGenome>),
}

/// Everything one run needs; deterministic given the config.
struct Driver {
    evaluator: CloudEvaluator,
    crossover: CrossoverOperator<PlacementGenome>,
    selector: SputnikSelector<PlacementGenome>,
    generation_config: GenerationConfig,
    score_bounds: RunningBounds,
    hypervolume_bounds: [(f64, f64); 2],
    rng: ChaCha8Rng,
    host: Host,
    population_size: usize,
    operator_ids: Vec<String>,
}

impl Driver {
    fn new(config: &RunConfig) -> Result<Self, BenchError> {
        config.validate()?;
        let instance = Arc::new(load_instance(&config.instance)?);
        instance
            .validate()
            .map_err(|e| BenchError::Config(format!("invalid instance: {e}")))?;
        let hypervolume_bounds = instance.objective_bounds();
        for (i, (min, max)) in hypervolume_bounds.iter().enumerate() {
            if max <= min {
                return Err(BenchError::Config(format!(
                    "instance objective {i} has a degenerate range [{min}, {max}]; \
                     hypervolume normalization needs max > min"
                )));
            }
        }

        let pool = cloud::operator_set(&instance);
        let operator_ids = pool.ids();
        // Independent, deterministic randomness streams per concern.
        let mut engine_rng = ChaCha8Rng::seed_from_u64(config.seed);
        engine_rng.set_stream(0);
        let mut selector_rng = ChaCha8Rng::seed_from_u64(config.seed);
        selector_rng.set_stream(1);
        let mut init_rng = ChaCha8Rng::seed_from_u64(config.seed);
        init_rng.set_stream(2);

        let selector = SputnikSelector::from_rng(
            pool,
            config.strategy,
            config.exploration_floor,
            selector_rng,
        )?;
        let evaluator = CloudEvaluator::new(instance.clone());

        let mut score_bounds = RunningBounds::new(2);
        let mut members = Vec::with_capacity(config.population_size);
        for _ in 0..config.population_size {
            let genome = cloud::random_genome(&instance, &mut init_rng);
            let objectives: ObjectiveVector = cloud::ObjectivePair::of(&genome, &instance).into();
            score_bounds.update(&objectives);
            members.push(Individual::evaluated(genome, objectives));
        }
        let population = Population::new(members);

        let host = match config.algorithm {
            Algorithm::Nsga2 => Host::Nsga2(population),
            Algorithm::EpsMoea => {
                let epsilon = config
                    .epsilon
                    .expect("validated: eps-moea has epsilon")
                    .to_vec();
                Host::EpsMoea(EpsilonMoeaState::new(population, epsilon)?)
            }
        };

        Ok(Driver {
            evaluator,
            crossover: cloud::crossover(),
            selector,
            generation_config: GenerationConfig {
                crossover_probability: config.crossover_probability,
                mutation_probability: config.mutation_probability,
            },
            score_bounds,
            hypervolume_bounds,
            rng: engine_rng,
            host,
            population_size: config.population_size,
            operator_ids,
        })
    }

    /// Current non-dominated set: front 0 of the population for NSGA-II,
    /// the archive for the epsilon host.
    fn current_front(&self) -> Vec<ObjectiveVector> {
        match &self.host {
            Host::Nsga2(population) => {
                let fronts = fast_nondominated_sort(population);
                fronts[0]
                    .iter()
                    .map(|&i| population.members[i].objectives().clone())
                    .collect()
            }
            Host::EpsMoea(state) => state
                .archive
                .members()
                .iter()
                .map(|m| m.objectives().clone())
                .collect(),
        }
    }

    /// The individuals summarized in the trace statistics: the population
    /// for NSGA-II, the archive for the epsilon host.
    fn summary_objectives(&self) -> Vec<ObjectiveVector> {
        match &self.host {
            Host::Nsga2(population) => population
                .members
                .iter()
                .map(|m| m.objectives().clone())
                .collect(),
            Host::EpsMoea(state) => state
                .archive
                .members()
                .iter()
                .map(|m| m.objectives().clone())
                .collect(),
        }
    }

    /// Runs one generation (one generational step for NSGA-II; a block of
    /// `population_size` steady-state steps for the epsilon host) and
    /// returns its trace row.
    fn step(&mut self, generation: usize) -> Result<TraceRow, BenchError> {
        match &mut self.host {
            Host::Nsga2(population) => {
                *population = nsga2_generation(
                    population,
                    &mut self.selector,
                    &self.crossover,
                    &self.evaluator,
                    &self.generation_config,
                    &mut self.score_bounds,
                    &mut self.rng,
                )?;
            }
            Host::EpsMoea(state) => {
                for _ in 0..self.population_size {
                    epsilon_moea_generation(
                        state,
                        &mut self.selector,
                        &self.crossover,
                        &self.evaluator,
                        &self.generation_config,
                        &mut self.score_bounds,
                        &mut self.rng,
                    )?;
                }
            }
        }

        let operator_counts: Vec<u32> = self
            .selector
            .credits()
            .iter()
            .map(|c| c.applications_this_gen())
            .collect();
        self.selector.end_generation();
        let operator_impacts: Vec<Option<f64>> = self
            .selector
            .credits()
            .iter()
            .map(|c| c.delta_impact())
            .collect();

        let front = self.current_front();
        let (normalized, _clamped) = normalize_front(&front, &self.hypervolume_bounds)
            .map_err(|e| BenchError::Runtime(e.to_string()))?;
        let hypervolume = hypervolume_2d(&normalized, NORMALIZED_REFERENCE)
            .map_err(|e| BenchError::Runtime(e.to_string()))?;

        let summary = self.summary_objectives();
        let count = summary.len() as f64;
        let best_cost = summary.iter().map(|o| o[0]).fold(f64::INFINITY, f64::min);
        let mean_cost = summary.iter().map(|o| o[0]).sum::<f64>() / count;
        let best_latency = summary.iter().map(|o| o[1]).fold(f64::INFINITY, f64::min);
        let mean_latency = summary.iter().map(|o| o[1]).sum::<f64>() / count;

        Ok(TraceRow {
            generation,
            hypervolume,
            best_cost,
            mean_cost,
            best_latency,
            mean_latency,
            operator_counts,
            operator_impacts,
        })
    }
}

/// Executes the configured run: `generations` rows, deterministic per seed.
pub fn run_experiment(config: &RunConfig) -> Result<RunOutput, BenchError> {
    let mut driver = Driver::new(config)?;
    let mut rows = Vec::with_capacity(config.generations);
    for generation in 0..config.generations {
        rows.push(driver.step(generation)?);
    }
    Ok(RunOutput {
        algorithm: config.algorithm,
        strategy: config.strategy,
        seed: config.seed,
        trace: RunTrace {
            operator_ids: driver.operator_ids.clone(),
            rows,
        },
        reached_cap: false,
    })
}

/// Runs until the hypervolume is unchanged (within 1e-9) for `window`
/// consecutive generations, or `config.generations` acts as a hard cap.
pub fn stagnation_run(config: &RunConfig, window: usize) -> Result<RunOutput, BenchError> {
    if window < 1 {
        return Err(BenchError::Config("stagnation window must be >= 1".into()));
    }
    let mut driver = Driver::new(config)?;
    let mut rows: Vec<TraceRow> = Vec::new();
    let mut unchanged = 0usize;
    let mut reached_cap = false;
    for generation in 0.. {
        let row = driver.step(generation)?;
        if let Some(previous) = rows.last() {
            if (row.hypervolume - previous.hypervolume).abs() <= 1e-9 {
                unchanged += 1;
            } else {
                unchanged = 0;
            }
        }
        rows.push(row);
        if unchanged >= window {
            break;
        }
        if rows.len() >= config.generations {
            reached_cap = true;
            break;
        }
    }
    Ok(RunOutput {
        algorithm: config.algorithm,
        strategy: config.strategy,
        seed: config.seed,
        trace: RunTrace {
            operator_ids: driver.operator_ids.clone(),
            rows,
        },
        reached_cap,
    })
}
