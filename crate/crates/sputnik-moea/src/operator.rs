//! Pluggable genetic operator and evaluation interfaces.

use std::sync::Arc;

use rand::RngCore;

use crate::error::MoeaError;
use crate::objective::ObjectiveVector;

/// Shared mutation closure: genome in, mutated genome out.
pub type MutationFn<G> = Arc<dyn Fn(&G, &mut dyn RngCore) -> G + Send + Sync>;

/// Shared crossover closure: two parents in, two children out.
pub type CrossoverFn<G> = Arc<dyn Fn(&G, &G, &mut dyn RngCore) -> (G, G) + Send + Sync>;

/// A named mutation operator: a genome transformation driven by a
/// randomness source. Applying the same genome with the same random stream
/// state yields the same output.
pub struct OperatorHandle<G> {
    id: Arc<str>,
    apply: MutationFn<G>,
}

impl<G> Clone for OperatorHandle<G> {
    fn clone(&self) -> Self {
        OperatorHandle {
            id: self.id.clone(),
            apply: self.apply.clone(),
        }
    }
}

impl<G> OperatorHandle<G> {
    pub fn new<F>(id: &str, apply: F) -> Self
    where
        F: Fn(&G, &mut dyn RngCore) -> G + Send + Sync + 'static,
    {
        OperatorHandle {
            id: Arc::from(id),
            apply: Arc::new(apply),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn id_arc(&self) -> Arc<str> {
        self.id.clone()
    }

    pub fn apply(&self, genome: &G, rng: &mut dyn RngCore) -> G {
        (self.apply)(genome, rng)
    }
}

impl<G> std::fmt::Debug for OperatorHandle<G> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OperatorHandle({})", self.id)
    }
}

/// A non-empty, uniquely named set of mutation operators.
#[derive(Debug)]
pub struct OperatorPool<G> {
    operators: Vec<OperatorHandle<G>>,
}

impl<G> Clone for OperatorPool<G> {
    fn clone(&self) -> Self {
        OperatorPool {
            operators: self.operators.clone(),
        }
    }
}

impl<G> OperatorPool<G> {
    /// Panics on an empty pool or duplicate operator ids.
    pub fn new(operators: Vec<OperatorHandle<G>>) -> Self {
        assert!(!operators.is_empty(), "operator pool must not be empty");
        for i in 0..operators.len() {
            for j in (i + 1)..operators.len() {
                assert_ne!(
                    operators[i].id(),
                    operators[j].id(),
                    "duplicate operator id in pool"
                );
            }
        }
        OperatorPool { operators }
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn get(&self, index: usize) -> &OperatorHandle<G> {
        &self.operators[index]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.operators.iter().position(|op| op.id() == id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &OperatorHandle<G>> {
        self.operators.iter()
    }

    pub fn ids(&self) -> Vec<String> {
        self.operators
            .iter()
            .map(|op| op.id().to_string())
            .collect()
    }
}

/// A crossover operator producing two children from two parents.
pub struct CrossoverOperator<G> {
    apply: CrossoverFn<G>,
}

impl<G> Clone for CrossoverOperator<G> {
    fn clone(&self) -> Self {
        CrossoverOperator {
            apply: self.apply.clone(),
        }
    }
}

impl<G> CrossoverOperator<G> {
    pub fn new<F>(apply: F) -> Self
    where
        F: Fn(&G, &G, &mut dyn RngCore) -> (G, G) + Send + Sync + 'static,
    {
        CrossoverOperator {
            apply: Arc::new(apply),
        }
    }

    pub fn apply(&self, a: &G, b: &G, rng: &mut dyn RngCore) -> (G, G) {
        (self.apply)(a, b, rng)
    }
}

/// Chooses which mutation operator each offspring receives and learns from
/// the reported outcomes. The generation loop calls `select_operator` once
/// per mutation, `report_outcome` after the offspring is evaluated, and
/// `end_generation` when the generation's offspring are complete.
pub trait OperatorSelector<G> {
    fn select_operator(&mut self) -> OperatorHandle<G>;

    /// Records one application: `parent_score` and `offspring_score` are
    /// normalized mean-fitness scalars (see [`crate::selector::score_of`]);
    /// improvement is `parent_score - offspring_score`, positive when the
    /// operator helped under minimization.
    fn report_outcome(&mut self, operator_id: &str, parent_score: f64, offspring_score: f64);

    fn end_generation(&mut self);
}

/// Maps genomes to objective vectors. Evaluation must be pure and free of
/// side effects on shared state so offspring may be evaluated in parallel.
pub trait Evaluator<G> {
    fn evaluate(&self, genome: &G) -> Result<ObjectiveVector, MoeaError>;
}

impl<G, F> Evaluator<G> for F
where
    F: Fn(&G) -> Result<ObjectiveVector, MoeaError>,
{
    fn evaluate(&self, genome: &G) -> Result<ObjectiveVector, MoeaError> {
        self(genome)
    }
}

/// Per-objective minimum and maximum observed over every evaluation since
/// generation 0. The bounds only ever widen.
#[derive(Clone, Debug)]
pub struct RunningBounds {
    ranges: Vec<(f64, f64)>,
}

impl RunningBounds {
    pub fn new(objective_count: usize) -> Self {
        RunningBounds {
            ranges: vec![(f64::INFINITY, f64::NEG_INFINITY); objective_count],
        }
    }

    pub fn update(&mut self, objectives: &ObjectiveVector) {
        assert_eq!(objectives.len(), self.ranges.len());
        for (range, &value) in self.ranges.iter_mut().zip(objectives.values()) {
            range.0 = range.0.min(value);
            range.1 = range.1.max(value);
        }
    }

    /// `(min, max)` per objective. Meaningless until at least one update.
    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }
}

/// Validation helper shared by [configuration errors](MoeaError::Config).
pub(crate) fn require_probability(value: f64, name: &str) -> Result<(), MoeaError> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(MoeaError::Config(format!(
            "{name} must be a probability in [0, 1], got {value}"
        )));
    }
    Ok(())
}
