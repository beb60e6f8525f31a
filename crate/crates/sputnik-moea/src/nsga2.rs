//! One elitist NSGA-II generational step with pluggable mutation selection.

use rand::Rng;

use crate::error::MoeaError;
use crate::objective::ObjectiveVector;
use crate::operator::{
    require_probability, CrossoverOperator, Evaluator, OperatorSelector, RunningBounds,
};
use crate::population::{Individual, Population};
use crate::selector::score_of;
use crate::sorting::{crowding_distance, fast_nondominated_sort};

/// Variation parameters for one generational step.
#[derive(Clone, Copy, Debug)]
pub struct GenerationConfig {
    /// Probability that a parent pair is recombined (otherwise cloned).
    pub crossover_probability: f64,
    /// Probability that an offspring receives exactly one mutation operator.
    pub mutation_probability: f64,
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<(), MoeaError> {
        require_probability(self.crossover_probability, "crossover_probability")?;
        require_probability(self.mutation_probability, "mutation_probability")
    }
}

/// `(rank, crowding)` per member, ranks from non-dominated sorting and
/// crowding computed per front.
pub(crate) fn rank_and_crowding<G>(pop: &Population<G>) -> (Vec<usize>, Vec<f64>) {
    let fronts = fast_nondominated_sort(pop);
    let mut rank = vec![0usize; pop.len()];
    let mut crowding = vec![0.0f64; pop.len()];
    for (front_index, front) in fronts.iter().enumerate() {
        let points: Vec<ObjectiveVector> = front
            .iter()
            .map(|&i| pop.members[i].objectives().clone())
            .collect();
        let distances = crowding_distance(&points);
        for (&member, distance) in front.iter().zip(distances) {
            rank[member] = front_index;
            crowding[member] = distance;
        }
    }
    (rank, crowding)
}

/// Binary tournament on `(rank, crowding)`: lower rank wins, then larger
/// crowding, then a coin flip.
fn tournament<R: Rng>(rank: &[usize], crowding: &[f64], rng: &mut R) -> usize {
    let a = rng.gen_range(0..rank.len());
    let b = rng.gen_range(0..rank.len());
    if rank[a] != rank[b] {
        if rank[a] < rank[b] {
            a
        } else {
            b
        }
    } else if crowding[a] != crowding[b] {
        if crowding[a] > crowding[b] {
            a
        } else {
            b
        }
    } else if rng.gen_bool(0.5) {
        a
    } else {
        b
    }
}

/// Mutates (maybe), evaluates, and credit-reports one offspring genome.
pub(crate) fn vary_and_evaluate<G, E, S, R>(
    genome: G,
    selector: &mut S,
    evaluator: &E,
    mutation_probability: f64,
    bounds: &mut RunningBounds,
    rng: &mut R,
) -> Result<Individual<G>, MoeaError>
where
    G: Clone,
    E: Evaluator<G>,
    S: OperatorSelector<G>,
    R: Rng,
{
    if mutation_probability > 0.0 && rng.gen_bool(mutation_probability) {
        let operator = selector.select_operator();
        let pre_mutation = evaluator.evaluate(&genome)?;
        let mutated = operator.apply(&genome, rng);
        let post_mutation = evaluator.evaluate(&mutated)?;
        // Widen the bounds with both points before scoring so parent and
        // offspring are scored against the same normalization.
        bounds.update(&pre_mutation);
        bounds.update(&post_mutation);
        let parent_score = score_of(&pre_mutation, bounds.ranges());
        let offspring_score = score_of(&post_mutation, bounds.ranges());
        selector.report_outcome(operator.id(), parent_score, offspring_score);
        Ok(Individual {
            genome: mutated,
            objectives: Some(post_mutation),
            provenance: Some(operator.id_arc()),
        })
    } else {
        let objectives = evaluator.evaluate(&genome)?;
        bounds.update(&objectives);
        Ok(Individual {
            genome,
            objectives: Some(objectives),
            provenance: None,
        })
    }
}

/// Produces the next generation of equal size.
///
/// Parents are chosen by binary tournament on `(rank, crowding)`; pairs are
/// recombined with the configured probability; each offspring receives at
/// most one mutation operator drawn from `selector`, whose outcome is
/// reported back after evaluation; environmental selection is elitist
/// (mu + lambda) truncation by `(rank, crowding)`.
///
/// Any offspring evaluation failure aborts the step.
pub fn nsga2_generation<G, E, S, R>(
    pop: &Population<G>,
    selector: &mut S,
    crossover: &CrossoverOperator<G>,
    evaluator: &E,
    config: &GenerationConfig,
    bounds: &mut RunningBounds,
    rng: &mut R,
) -> Result<Population<G>, MoeaError>
where
    G: Clone,
    E: Evaluator<G>,
    S: OperatorSelector<G>,
    R: Rng,
{
    config.validate()?;
    let mu = pop.len();
    assert!(mu > 0, "population must not be empty");
    let (rank, crowding) = rank_and_crowding(pop);

    let mut offspring: Vec<Individual<G>> = Vec::with_capacity(mu);
    while offspring.len() < mu {
        let p1 = tournament(&rank, &crowding, rng);
        let p2 = tournament(&rank, &crowding, rng);
        let (c1, c2) =
            if config.crossover_probability > 0.0 && rng.gen_bool(config.crossover_probability) {
                crossover.apply(&pop.members[p1].genome, &pop.members[p2].genome, rng)
            } else {
                (
                    pop.members[p1].genome.clone(),
                    pop.members[p2].genome.clone(),
                )
            };
        for genome in [c1, c2] {
            if offspring.len() == mu {
                break;
            }
            offspring.push(vary_and_evaluate(
                genome,
                selector,
                evaluator,
                config.mutation_probability,
                bounds,
                rng,
            )?);
        }
    }

    // (mu + lambda) truncation over parents and offspring.
    let mut combined: Vec<Individual<G>> = pop.members.clone();
    combined.append(&mut offspring);
    let combined_pop = Population {
        members: combined,
        generation_index: pop.generation_index,
    };
    let fronts = fast_nondominated_sort(&combined_pop);

    let mut selected_indices: Vec<usize> = Vec::with_capacity(mu);
    for front in fronts {
        let remaining = mu - selected_indices.len();
        if remaining == 0 {
            break;
        }
        if front.len() <= remaining {
            selected_indices.extend(front);
        } else {
            let points: Vec<ObjectiveVector> = front
                .iter()
                .map(|&i| combined_pop.members[i].objectives().clone())
                .collect();
            let distances = crowding_distance(&points);
            let mut order: Vec<usize> = (0..front.len()).collect();
            // Stable sort: ties keep combined order (parents before offspring).
            order.sort_by(|&a, &b| {
                distances[b]
                    .partial_cmp(&distances[a])
                    .expect("crowding distances are comparable")
            });
            order.truncate(remaining);
            selected_indices.extend(order.into_iter().map(|k| front[k]));
        }
    }
    debug_assert_eq!(selected_indices.len(), mu);

    let mut slots: Vec<Option<Individual<G>>> =
        combined_pop.members.into_iter().map(Some).collect();
    let selected: Vec<Individual<G>> = selected_indices
        .into_iter()
        .map(|i| slots[i].take().expect("each member selected at most once"))
        .collect();

    Ok(Population {
        members: selected,
        generation_index: pop.generation_index + 1,
    })
}
