//! Individuals and populations.

use std::sync::Arc;

use crate::objective::ObjectiveVector;

/// A candidate solution: a problem-specific genome plus, once evaluated,
/// its objective vector. `provenance` names the mutation operator that
/// produced the individual; it is absent for initial-population members
/// and crossover-only offspring.
#[derive(Clone, Debug)]
pub struct Individual<G> {
    pub genome: G,
    pub objectives: Option<ObjectiveVector>,
    pub provenance: Option<Arc<str>>,
}

impl<G> Individual<G> {
    pub fn new(genome: G) -> Self {
        Individual {
            genome,
            objectives: None,
            provenance: None,
        }
    }

    pub fn evaluated(genome: G, objectives: ObjectiveVector) -> Self {
        Individual {
            genome,
            objectives: Some(objectives),
            provenance: None,
        }
    }

    /// The evaluated objectives. Panics if the individual has not been
    /// evaluated; selection must never see unevaluated members.
    pub fn objectives(&self) -> &ObjectiveVector {
        self.objectives
            .as_ref()
            .expect("individual entered selection without evaluated objectives")
    }
}

/// A generation of individuals.
#[derive(Clone, Debug)]
pub struct Population<G> {
    pub members: Vec<Individual<G>>,
    pub generation_index: usize,
}

impl<G> Population<G> {
    pub fn new(members: Vec<Individual<G>>) -> Self {
        Population {
            members,
            generation_index: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
