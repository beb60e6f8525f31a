//! The Sputnik hyper-heuristic: history-driven mutation operator selection.
//!
//! The selector tracks, per operator, the mean improvement in normalized
//! fitness its applications produced during the last generation it was used
//! (its *delta impact*), and biases future operator draws toward operators
//! with positive impact. Two biased strategies are available next to the
//! uniform baseline:
//!
//! * **Elitist** — always draw the operator with the single highest positive
//!   delta impact.
//! * **Caste** — draw among positive-impact operators with probability
//!   proportional to their delta impact.
//!
//! Both biased strategies reserve an exploration floor (10% by default) of
//! purely uniform draws so every operator keeps a minimum selection rate and
//! can re-enter the elite.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::MoeaError;
use crate::objective::ObjectiveVector;
use crate::operator::{require_probability, OperatorHandle, OperatorPool, OperatorSelector};

/// Operator selection strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Random,
    Elitist,
    Caste,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Random => "random",
            Strategy::Elitist => "elitist",
            Strategy::Caste => "caste",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = MoeaError;

    fn from_str(s: &str) -> Result<Self, MoeaError> {
        match s {
            "random" => Ok(Strategy::Random),
            "elitist" => Ok(Strategy::Elitist),
            "caste" => Ok(Strategy::Caste),
            other => Err(MoeaError::Config(format!(
                "unknown strategy {other:?}, expected random | elitist | caste"
            ))),
        }
    }
}

/// Per-operator running record of applications and impact.
#[derive(Clone, Debug)]
pub struct OperatorCredit {
    operator_id: Arc<str>,
    applications_this_gen: u32,
    sum_improvement_this_gen: f64,
    delta_impact: Option<f64>,
    ever_used: bool,
}

impl OperatorCredit {
    fn new(operator_id: Arc<str>) -> Self {
        OperatorCredit {
            operator_id,
            applications_this_gen: 0,
            sum_improvement_this_gen: 0.0,
            delta_impact: None,
            ever_used: false,
        }
    }

    pub fn operator_id(&self) -> &str {
        &self.operator_id
    }

    pub fn applications_this_gen(&self) -> u32 {
        self.applications_this_gen
    }

    pub fn sum_improvement_this_gen(&self) -> f64 {
        self.sum_improvement_this_gen
    }

    /// Mean improvement per application over the last completed generation
    /// in which the operator was applied. `None` until first use completes
    /// a generation.
    pub fn delta_impact(&self) -> Option<f64> {
        self.delta_impact
    }

    pub fn ever_used(&self) -> bool {
        self.ever_used
    }
}

/// Selector state: the operator pool, one credit record per operator, the
/// strategy, the exploration floor, and a seeded randomness source.
pub struct SputnikSelector<G> {
    pool: OperatorPool<G>,
    credits: Vec<OperatorCredit>,
    strategy: Strategy,
    exploration_floor: f64,
    rng: ChaCha8Rng,
}

impl<G> SputnikSelector<G> {
    pub const DEFAULT_EXPLORATION_FLOOR: f64 = 0.10;

    pub fn new(
        pool: OperatorPool<G>,
        strategy: Strategy,
        exploration_floor: f64,
        seed: u64,
    ) -> Result<Self, MoeaError> {
        Self::from_rng(
            pool,
            strategy,
            exploration_floor,
            ChaCha8Rng::seed_from_u64(seed),
        )
    }

    pub fn from_rng(
        pool: OperatorPool<G>,
        strategy: Strategy,
        exploration_floor: f64,
        rng: ChaCha8Rng,
    ) -> Result<Self, MoeaError> {
        require_probability(exploration_floor, "exploration_floor")?;
        let credits = pool
            .iter()
            .map(|op| OperatorCredit::new(op.id_arc()))
            .collect();
        Ok(SputnikSelector {
            pool,
            credits,
            strategy,
            exploration_floor,
            rng,
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn pool(&self) -> &OperatorPool<G> {
        &self.pool
    }

    pub fn credits(&self) -> &[OperatorCredit] {
        &self.credits
    }

    /// True once every operator has been applied at least once.
    pub fn bootstrap_complete(&self) -> bool {
        self.credits.iter().all(|c| c.ever_used)
    }

    fn pick_uniform(&mut self) -> usize {
        self.rng.gen_range(0..self.pool.len())
    }

    fn pick(&mut self) -> usize {
        // The Random strategy is the uniform baseline: it must behave
        // exactly like a plain uniform draw, so it bypasses both the
        // bootstrap ordering and the exploration-floor coin.
        if self.strategy == Strategy::Random {
            return self.pick_uniform();
        }

        if !self.bootstrap_complete() {
            // Bootstrap: draw uniformly among never-used operators so all
            // operators gather an impact record as early as possible.
            let unused: Vec<usize> = self
                .credits
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.ever_used)
                .map(|(i, _)| i)
                .collect();
            return unused[self.rng.gen_range(0..unused.len())];
        }

        if self.rng.gen_bool(self.exploration_floor) {
            return self.pick_uniform();
        }

        let positive: Vec<(usize, f64)> = self
            .credits
            .iter()
            .enumerate()
            .filter_map(|(i, c)| match c.delta_impact {
                Some(d) if d > 0.0 => Some((i, d)),
                _ => None,
            })
            .collect();
        if positive.is_empty() {
            return self.pick_uniform();
        }

        match self.strategy {
            Strategy::Random => unreachable!(),
            Strategy::Elitist => {
                let best = positive
                    .iter()
                    .map(|&(_, d)| d)
                    .fold(f64::NEG_INFINITY, f64::max);
                let tied: Vec<usize> = positive
                    .iter()
                    .filter(|&&(_, d)| d == best)
                    .map(|&(i, _)| i)
                    .collect();
                tied[self.rng.gen_range(0..tied.len())]
            }
            Strategy::Caste => {
                let total: f64 = positive.iter().map(|&(_, d)| d).sum();
                let mut draw = self.rng.gen::<f64>() * total;
                for &(i, d) in &positive {
                    draw -= d;
                    if draw <= 0.0 {
                        return i;
                    }
                }
                positive.last().expect("non-empty").0
            }
        }
    }
}

impl<G> OperatorSelector<G> for SputnikSelector<G> {
    fn select_operator(&mut self) -> OperatorHandle<G> {
        let index = self.pick();
        self.pool.get(index).clone()
    }

    fn report_outcome(&mut self, operator_id: &str, parent_score: f64, offspring_score: f64) {
        let index = self
            .pool
            .position(operator_id)
            .unwrap_or_else(|| panic!("unknown operator id {operator_id:?}"));
        let credit = &mut self.credits[index];
        credit.applications_this_gen += 1;
        credit.sum_improvement_this_gen += parent_score - offspring_score;
        credit.ever_used = true;
    }

    fn end_generation(&mut self) {
        for credit in &mut self.credits {
            if credit.applications_this_gen > 0 {
                credit.delta_impact =
                    Some(credit.sum_improvement_this_gen / credit.applications_this_gen as f64);
            }
            credit.applications_this_gen = 0;
            credit.sum_improvement_this_gen = 0.0;
        }
    }
}

/// Normalized mean fitness of an objective vector: the mean over objectives
/// of `(f - min) / (max - min)`, each term clamped to `[0, 1]`. Objectives
/// with `max == min` contribute 0. Lower is better.
pub fn score_of(objectives: &ObjectiveVector, bounds: &[(f64, f64)]) -> f64 {
    assert_eq!(objectives.len(), bounds.len(), "bounds/objective mismatch");
    let mut sum = 0.0;
    for (value, &(min, max)) in objectives.values().iter().zip(bounds) {
        assert!(max >= min, "bounds must satisfy max >= min");
        if max > min {
            sum += ((value - min) / (max - min)).clamp(0.0, 1.0);
        }
    }
    sum / objectives.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    fn noop_pool(ids: &[&str]) -> OperatorPool<u8> {
        OperatorPool::new(
            ids.iter()
                .map(|id| OperatorHandle::new(id, |g: &u8, _: &mut dyn RngCore| *g))
                .collect(),
        )
    }

    fn selector(strategy: Strategy, seed: u64) -> SputnikSelector<u8> {
        SputnikSelector::new(noop_pool(&["m1", "m2", "m3"]), strategy, 0.10, seed).unwrap()
    }

    /// Install fixed delta impacts by reporting one outcome per operator
    /// and closing the generation.
    fn install_impacts(sel: &mut SputnikSelector<u8>, impacts: &[(&str, f64)]) {
        for &(id, delta) in impacts {
            sel.report_outcome(id, delta, 0.0);
        }
        sel.end_generation();
    }

    fn empirical_frequencies(sel: &mut SputnikSelector<u8>, draws: usize) -> Vec<f64> {
        let mut counts = vec![0usize; sel.pool().len()];
        for _ in 0..draws {
            let op = sel.select_operator();
            counts[sel.pool().position(op.id()).unwrap()] += 1;
        }
        counts.iter().map(|&c| c as f64 / draws as f64).collect()
    }

    #[test]
    fn caste_frequencies_match_closed_form() {
        let mut sel = selector(Strategy::Caste, 11);
        install_impacts(&mut sel, &[("m1", 0.3), ("m2", 0.1), ("m3", -0.2)]);
        let freq = empirical_frequencies(&mut sel, 100_000);
        // 0.9 * 0.75 + 0.1/3 and 0.9 * 0.25 + 0.1/3 and 0.1/3.
        assert!((freq[0] - 0.7083).abs() < 0.01, "m1 freq {}", freq[0]);
        assert!((freq[1] - 0.2583).abs() < 0.01, "m2 freq {}", freq[1]);
        assert!((freq[2] - 0.0333).abs() < 0.01, "m3 freq {}", freq[2]);
    }

    #[test]
    fn elitist_frequencies_match_closed_form() {
        let mut sel = selector(Strategy::Elitist, 12);
        install_impacts(&mut sel, &[("m1", 0.3), ("m2", 0.1), ("m3", -0.2)]);
        let freq = empirical_frequencies(&mut sel, 100_000);
        assert!((freq[0] - 0.9333).abs() < 0.01, "m1 freq {}", freq[0]);
        assert!((freq[1] - 0.0333).abs() < 0.01, "m2 freq {}", freq[1]);
        assert!((freq[2] - 0.0333).abs() < 0.01, "m3 freq {}", freq[2]);
    }

    #[test]
    fn all_negative_impacts_fall_back_to_uniform() {
        for strategy in [Strategy::Elitist, Strategy::Caste] {
            let mut sel = selector(strategy, 13);
            install_impacts(&mut sel, &[("m1", -0.3), ("m2", -0.1), ("m3", -0.2)]);
            let freq = empirical_frequencies(&mut sel, 100_000);
            for (i, f) in freq.iter().enumerate() {
                assert!((f - 1.0 / 3.0).abs() < 0.01, "op {i} freq {f}");
            }
        }
    }

    #[test]
    fn bootstrap_uses_every_operator_before_any_strategy_branch() {
        let mut sel = selector(Strategy::Elitist, 14);
        let mut seen = Vec::new();
        for _ in 0..3 {
            assert!(!sel.bootstrap_complete());
            let op = sel.select_operator();
            seen.push(op.id().to_string());
            sel.report_outcome(op.id(), 0.5, 0.4);
        }
        seen.sort();
        assert_eq!(seen, vec!["m1", "m2", "m3"]);
        assert!(sel.bootstrap_complete());
    }

    #[test]
    fn random_strategy_equals_plain_uniform_choice() {
        let pool = noop_pool(&["m1", "m2", "m3"]);
        let mut sel = SputnikSelector::new(pool, Strategy::Random, 0.10, 99).unwrap();
        let mut plain = ChaCha8Rng::seed_from_u64(99);
        for step in 0..1000 {
            let op = sel.select_operator();
            let expected = plain.gen_range(0..3usize);
            assert_eq!(
                sel.pool().position(op.id()).unwrap(),
                expected,
                "diverged at step {step}"
            );
            // Reports and generation boundaries must not disturb the draws.
            sel.report_outcome(op.id(), 0.9, 0.1);
            if step % 100 == 99 {
                sel.end_generation();
            }
        }
    }

    #[test]
    fn report_outcome_accumulates_improvements() {
        let mut sel = selector(Strategy::Caste, 15);
        sel.report_outcome("m1", 0.60, 0.45);
        assert!((sel.credits()[0].sum_improvement_this_gen() - 0.15).abs() < 1e-12);
        sel.report_outcome("m1", 0.45, 0.60);
        assert!(sel.credits()[0].sum_improvement_this_gen().abs() < 1e-12);
        sel.report_outcome("m2", 0.5, 0.4);
        sel.report_outcome("m2", 0.8, 0.5);
        assert_eq!(sel.credits()[1].applications_this_gen(), 2);
        assert!((sel.credits()[1].sum_improvement_this_gen() - 0.4).abs() < 1e-12);
    }

    #[test]
    #[should_panic(expected = "unknown operator id")]
    fn report_outcome_rejects_unknown_id() {
        let mut sel = selector(Strategy::Random, 16);
        sel.report_outcome("nope", 0.5, 0.4);
    }

    #[test]
    fn end_generation_takes_means_and_holds_last() {
        let mut sel = selector(Strategy::Caste, 17);
        for _ in 0..4 {
            sel.report_outcome("m1", 0.05, 0.0);
        }
        sel.report_outcome("m2", 0.0, 0.07);
        sel.report_outcome("m3", 0.07, 0.0);
        sel.end_generation();
        assert!((sel.credits()[0].delta_impact().unwrap() - 0.05).abs() < 1e-12);
        assert!((sel.credits()[2].delta_impact().unwrap() - 0.07).abs() < 1e-12);

        // m3 unused in the next generation: its impact holds.
        sel.report_outcome("m1", 0.0, 0.01);
        sel.end_generation();
        assert!((sel.credits()[0].delta_impact().unwrap() + 0.01).abs() < 1e-12);
        assert!((sel.credits()[2].delta_impact().unwrap() - 0.07).abs() < 1e-12);

        // A generation with no mutations changes nothing.
        let before: Vec<Option<f64>> = sel.credits().iter().map(|c| c.delta_impact()).collect();
        sel.end_generation();
        let after: Vec<Option<f64>> = sel.credits().iter().map(|c| c.delta_impact()).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn every_operator_keeps_the_exploration_floor_share() {
        // One operator forced permanently dominant; the rest must still be
        // drawn at rate >= floor / |pool|.
        let mut sel = selector(Strategy::Elitist, 18);
        install_impacts(&mut sel, &[("m1", 0.9), ("m2", 0.1), ("m3", 0.1)]);
        let freq = empirical_frequencies(&mut sel, 100_000);
        for f in &freq[1..] {
            assert!(*f >= 0.10 / 3.0 - 0.01, "floor violated: {f}");
        }
    }

    #[test]
    fn score_of_examples() {
        let bounds = [(0.0, 4.0), (0.0, 60.0)];
        let mid = ObjectiveVector::new(vec![2.0, 30.0]);
        assert!((score_of(&mid, &bounds) - 0.5).abs() < 1e-12);
        let best = ObjectiveVector::new(vec![0.0, 0.0]);
        assert_eq!(score_of(&best, &bounds), 0.0);
        let worst = ObjectiveVector::new(vec![4.0, 60.0]);
        assert_eq!(score_of(&worst, &bounds), 1.0);
    }

    #[test]
    fn score_of_zero_range_objective_contributes_zero() {
        let bounds = [(2.0, 2.0), (0.0, 10.0)];
        let point = ObjectiveVector::new(vec![2.0, 5.0]);
        assert!((score_of(&point, &bounds) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn score_of_clamps_out_of_bounds_values() {
        let bounds = [(0.0, 1.0), (0.0, 1.0)];
        let point = ObjectiveVector::new(vec![-5.0, 9.0]);
        assert_eq!(score_of(&point, &bounds), 0.5);
    }

    #[test]
    fn exploration_floor_must_be_a_probability() {
        let err = SputnikSelector::new(noop_pool(&["m1"]), Strategy::Caste, 1.5, 1);
        assert!(err.is_err());
    }
}
