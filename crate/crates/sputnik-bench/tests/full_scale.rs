//! Full-scale experiment check: on a 100-VM generated instance the caste
//! strategy reaches 90% of the best observed hypervolume strictly sooner
//! than random on a majority of 20 paired seeds. The experiment itself is
//! the oracle.

use rayon::prelude::*;
use sputnik_bench::{run_experiment, Algorithm, InstanceSource, RunConfig};
use sputnik_moea::indicators::generations_to_threshold;
use sputnik_moea::Strategy;

#[test]
fn caste_beats_random_on_the_hundred_vm_instance() {
    const SEEDS: usize = 20;
    let base = RunConfig {
        algorithm: Algorithm::Nsga2,
        strategy: Strategy::Random,
        population_size: 100,
        generations: 300,
        mutation_probability: 0.9,
        crossover_probability: 0.9,
        exploration_floor: 0.1,
        epsilon: None,
        instance: InstanceSource::Generate {
            vms: 100,
            components: 50,
            public_fraction: 0.5,
            instance_seed: 2,
        },
        seed: 4000,
    };

    let jobs: Vec<RunConfig> = [Strategy::Random, Strategy::Caste]
        .into_iter()
        .flat_map(|strategy| {
            (0..SEEDS).map({
                let base = base.clone();
                move |k| base.with_strategy(strategy).with_seed(base.seed + k as u64)
            })
        })
        .collect();
    let outputs: Vec<_> = jobs
        .par_iter()
        .map(|config| run_experiment(config).expect("run"))
        .collect();

    let best = outputs
        .iter()
        .flat_map(|o| o.trace.hypervolume_series())
        .fold(f64::NEG_INFINITY, f64::max);
    let threshold = 0.9 * best;
    let generations_for = |strategy: Strategy, seed: u64| {
        let output = outputs
            .iter()
            .find(|o| o.strategy == strategy && o.seed == seed)
            .unwrap();
        generations_to_threshold(&output.trace.hypervolume_series(), threshold)
            .unwrap_or(usize::MAX)
    };

    let wins = (0..SEEDS)
        .filter(|&k| {
            let seed = base.seed + k as u64;
            generations_for(Strategy::Caste, seed) < generations_for(Strategy::Random, seed)
        })
        .count();
    assert!(
        wins > SEEDS / 2,
        "caste won only {wins}/{SEEDS} paired seeds"
    );
    println!("full scale: caste beat random on {wins}/{SEEDS} paired seeds");
}
