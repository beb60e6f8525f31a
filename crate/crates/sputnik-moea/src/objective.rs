//! Objective vectors under a minimization convention.

use serde::{Deserialize, Serialize};

/// The fitness values of an evaluated solution, one entry per objective.
///
/// All objectives are minimized. A problem with maximization objectives has
/// to negate them before constructing the vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    /// Wraps raw objective values. Panics if fewer than two objectives are
    /// given or any value is non-finite.
    pub fn new(values: Vec<f64>) -> Self {
        assert!(
            values.len() >= 2,
            "objective vectors need at least two objectives, got {}",
            values.len()
        );
        assert!(
            values.iter().all(|v| v.is_finite()),
            "objective values must be finite: {values:?}"
        );
        ObjectiveVector(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pareto dominance: `self` dominates `other` iff it is no worse in
    /// every objective and strictly better in at least one (minimization).
    ///
    /// Panics on length mismatch.
    pub fn dominates(&self, other: &ObjectiveVector) -> bool {
        assert_eq!(
            self.0.len(),
            other.0.len(),
            "dominance requires equal objective counts"
        );
        let mut strictly_better = false;
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a > b {
                return false;
            }
            if a < b {
                strictly_better = true;
            }
        }
        strictly_better
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(values: Vec<f64>) -> Self {
        ObjectiveVector::new(values)
    }
}

impl std::ops::Index<usize> for ObjectiveVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(values: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(values.to_vec())
    }

    #[test]
    fn strict_improvement_in_both_dominates() {
        assert!(v(&[1.0, 2.0]).dominates(&v(&[2.0, 3.0])));
    }

    #[test]
    fn identical_vectors_do_not_dominate() {
        assert!(!v(&[1.0, 2.0]).dominates(&v(&[1.0, 2.0])));
    }

    #[test]
    fn incomparable_vectors_do_not_dominate() {
        assert!(!v(&[1.0, 3.0]).dominates(&v(&[3.0, 1.0])));
        assert!(!v(&[3.0, 1.0]).dominates(&v(&[1.0, 3.0])));
    }

    #[test]
    fn weak_improvement_in_one_dominates() {
        assert!(v(&[1.0, 2.0]).dominates(&v(&[1.0, 3.0])));
    }

    #[test]
    #[should_panic(expected = "equal objective counts")]
    fn length_mismatch_panics() {
        v(&[1.0, 2.0]).dominates(&v(&[1.0, 2.0, 3.0]));
    }

    #[test]
    #[should_panic(expected = "finite")]
    fn non_finite_values_rejected() {
        v(&[f64::NAN, 1.0]);
    }

    fn arb_vector(n: usize) -> impl Strategy<Value = ObjectiveVector> {
        proptest::collection::vec(-100.0..100.0f64, n).prop_map(ObjectiveVector::new)
    }

    proptest! {
        #[test]
        fn dominance_is_irreflexive(a in arb_vector(3)) {
            prop_assert!(!a.dominates(&a));
        }

        #[test]
        fn dominance_is_asymmetric(a in arb_vector(3), b in arb_vector(3)) {
            prop_assert!(!(a.dominates(&b) && b.dominates(&a)));
        }

        #[test]
        fn dominance_is_transitive(
            a in arb_vector(2),
            b in arb_vector(2),
            c in arb_vector(2),
        ) {
            if a.dominates(&b) && b.dominates(&c) {
                prop_assert!(a.dominates(&c));
            }
        }
    }
}
