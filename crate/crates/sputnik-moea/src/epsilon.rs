//! Steady-state host with an epsilon-dominance archive.
//!
//! The archive partitions objective space into boxes of side epsilon and
//! keeps at most one member per box: candidates whose box is dominated by
//! an existing member's box are rejected, members with boxes dominated by
//! an accepted candidate are evicted, and inside one box the member closer
//! to the box's utopia corner wins.

use rand::Rng;

use crate::error::MoeaError;
use crate::objective::ObjectiveVector;
use crate::operator::{CrossoverOperator, Evaluator, OperatorSelector, RunningBounds};
use crate::population::{Individual, Population};
use crate::GenerationConfig;

#[derive(Clone, Debug)]
pub struct EpsilonArchive<G> {
    epsilon: Vec<f64>,
    members: Vec<Individual<G>>,
}

fn box_dominates(a: &[i64], b: &[i64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

fn box_of(objectives: &ObjectiveVector, epsilon: &[f64]) -> Vec<i64> {
    assert_eq!(
        objectives.len(),
        epsilon.len(),
        "epsilon dimension mismatch"
    );
    objectives
        .values()
        .iter()
        .zip(epsilon)
        .map(|(f, e)| (f / e).floor() as i64)
        .collect()
}

impl<G> EpsilonArchive<G> {
    pub fn new(epsilon: Vec<f64>) -> Result<Self, MoeaError> {
        if epsilon.is_empty() || epsilon.iter().any(|e| !e.is_finite() || *e <= 0.0) {
            return Err(MoeaError::Config(format!(
                "epsilon must be a vector of positive reals, got {epsilon:?}"
            )));
        }
        Ok(EpsilonArchive {
            epsilon,
            members: Vec::new(),
        })
    }

    pub fn members(&self) -> &[Individual<G>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn box_index(&self, objectives: &ObjectiveVector) -> Vec<i64> {
        box_of(objectives, &self.epsilon)
    }

    fn corner_distance_sq(&self, objectives: &ObjectiveVector, box_index: &[i64]) -> f64 {
        objectives
            .values()
            .iter()
            .zip(box_index)
            .zip(&self.epsilon)
            .map(|((f, b), e)| {
                let corner = *b as f64 * e;
                (f - corner) * (f - corner)
            })
            .sum()
    }

    /// Offers an evaluated candidate to the archive. Returns true when the
    /// candidate was accepted (possibly evicting members).
    pub fn try_insert(&mut self, candidate: Individual<G>) -> bool {
        let cand_objectives = candidate.objectives().clone();
        let cand_box = self.box_index(&cand_objectives);

        let mut same_box: Option<usize> = None;
        for (i, member) in self.members.iter().enumerate() {
            let member_box = self.box_index(member.objectives());
            if box_dominates(&member_box, &cand_box) {
                return false;
            }
            if member_box == cand_box {
                same_box = Some(i);
            }
        }

        if let Some(i) = same_box {
            // Same box: keep whichever sits closer to the box's utopia
            // corner; the incumbent wins ties.
            let incumbent = self.corner_distance_sq(self.members[i].objectives(), &cand_box);
            let challenger = self.corner_distance_sq(&cand_objectives, &cand_box);
            if challenger < incumbent {
                self.members[i] = candidate;
                return true;
            }
            return false;
        }

        let epsilon = &self.epsilon;
        self.members
            .retain(|member| !box_dominates(&cand_box, &box_of(member.objectives(), epsilon)));
        self.members.push(candidate);
        true
    }
}

/// Population plus archive state for the steady-state loop.
#[derive(Clone, Debug)]
pub struct EpsilonMoeaState<G> {
    pub population: Population<G>,
    pub archive: EpsilonArchive<G>,
}

impl<G: Clone> EpsilonMoeaState<G> {
    /// Seeds the archive from an evaluated initial population.
    pub fn new(population: Population<G>, epsilon: Vec<f64>) -> Result<Self, MoeaError> {
        let mut archive = EpsilonArchive::new(epsilon)?;
        for member in &population.members {
            archive.try_insert(member.clone());
        }
        Ok(EpsilonMoeaState {
            population,
            archive,
        })
    }
}

/// One steady-state step: one offspring from an archive parent and a
/// population parent, offered to the archive under epsilon dominance and to
/// the population under plain dominance.
pub fn epsilon_moea_generation<G, E, S, R>(
    state: &mut EpsilonMoeaState<G>,
    selector: &mut S,
    crossover: &CrossoverOperator<G>,
    evaluator: &E,
    config: &GenerationConfig,
    bounds: &mut RunningBounds,
    rng: &mut R,
) -> Result<(), MoeaError>
where
    G: Clone,
    E: Evaluator<G>,
    S: OperatorSelector<G>,
    R: Rng,
{
    config.validate()?;
    let pop = &mut state.population;
    assert!(!pop.is_empty(), "population must not be empty");
    assert!(
        !state.archive.is_empty(),
        "archive must be seeded before stepping"
    );

    // Population parent: dominance tournament between two uniform picks.
    let a = rng.gen_range(0..pop.len());
    let b = rng.gen_range(0..pop.len());
    let pop_parent = if pop.members[a]
        .objectives()
        .dominates(pop.members[b].objectives())
    {
        a
    } else if pop.members[b]
        .objectives()
        .dominates(pop.members[a].objectives())
    {
        b
    } else if rng.gen_bool(0.5) {
        a
    } else {
        b
    };
    let archive_parent = rng.gen_range(0..state.archive.len());

    let child_genome =
        if config.crossover_probability > 0.0 && rng.gen_bool(config.crossover_probability) {
            let (c, _) = crossover.apply(
                &state.archive.members()[archive_parent].genome,
                &pop.members[pop_parent].genome,
                rng,
            );
            c
        } else {
            pop.members[pop_parent].genome.clone()
        };

    let child = crate::nsga2::vary_and_evaluate(
        child_genome,
        selector,
        evaluator,
        config.mutation_probability,
        bounds,
        rng,
    )?;

    state.archive.try_insert(child.clone());

    // Standard steady-state population update: replace a member the child
    // dominates; discard the child if any member dominates it; otherwise
    // replace a uniformly random member.
    let child_objectives = child.objectives().clone();
    let dominated: Vec<usize> = pop
        .members
        .iter()
        .enumerate()
        .filter(|(_, m)| child_objectives.dominates(m.objectives()))
        .map(|(i, _)| i)
        .collect();
    if !dominated.is_empty() {
        let victim = dominated[rng.gen_range(0..dominated.len())];
        pop.members[victim] = child;
    } else if !pop
        .members
        .iter()
        .any(|m| m.objectives().dominates(&child_objectives))
    {
        let victim = rng.gen_range(0..pop.len());
        pop.members[victim] = child;
    }
    Ok(())
}
