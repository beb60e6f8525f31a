//! Non-dominated sorting and crowding distance.

use crate::objective::ObjectiveVector;
use crate::population::Population;

/// Fast non-dominated sort: partitions member indices into Pareto fronts.
/// Front 0 holds members dominated by nobody; front k holds members
/// dominated only by members of fronts < k.
///
/// Panics if any member is unevaluated.
pub fn fast_nondominated_sort<G>(pop: &Population<G>) -> Vec<Vec<usize>> {
    let objectives: Vec<&ObjectiveVector> = pop.members.iter().map(|m| m.objectives()).collect();
    sort_objectives(&objectives)
}

/// The sorting core, on bare objective vectors.
pub fn sort_objectives(objectives: &[&ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if objectives[i].dominates(objectives[j]) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            } else if objectives[j].dominates(objectives[i]) {
                dominated_by[j].push(i);
                domination_count[i] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Crowding distance per front member, aligned with the input order.
///
/// Boundary points per objective get infinity; interior points get the sum
/// over objectives of `(neighbor_above - neighbor_below) / (max - min)`.
/// Objectives with `max == min` contribute 0. Index ties sort stably so the
/// assignment is deterministic for duplicated points.
pub fn crowding_distance(front: &[ObjectiveVector]) -> Vec<f64> {
    assert!(
        !front.is_empty(),
        "crowding distance needs a non-empty front"
    );
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].len();
    let mut distance = vec![0.0f64; n];
    let mut order: Vec<usize> = (0..n).collect();
    for obj in 0..m {
        order.sort_by(|&a, &b| {
            front[a][obj]
                .partial_cmp(&front[b][obj])
                .expect("objective values are finite")
                .then(a.cmp(&b))
        });
        let min = front[order[0]][obj];
        let max = front[order[n - 1]][obj];
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        if max > min {
            let range = max - min;
            for w in 1..(n - 1) {
                let below = front[order[w - 1]][obj];
                let above = front[order[w + 1]][obj];
                distance[order[w]] += (above - below) / range;
            }
        }
    }
    distance
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::Individual;
    use proptest::prelude::*;

    fn v(values: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(values.to_vec())
    }

    fn pop_of(points: &[&[f64]]) -> Population<usize> {
        Population::new(
            points
                .iter()
                .enumerate()
                .map(|(i, p)| Individual::evaluated(i, v(p)))
                .collect(),
        )
    }

    /// Independent oracle: repeatedly peel off the set of members not
    /// dominated by any remaining member.
    fn brute_force_fronts(objectives: &[ObjectiveVector]) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..objectives.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    !remaining
                        .iter()
                        .any(|&j| objectives[j].dominates(&objectives[i]))
                })
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn three_point_example_matches_oracle() {
        let points: Vec<ObjectiveVector> = vec![v(&[1.0, 1.0]), v(&[2.0, 2.0]), v(&[0.0, 3.0])];
        let pop = pop_of(&[&[1.0, 1.0], &[2.0, 2.0], &[0.0, 3.0]]);
        let fronts = fast_nondominated_sort(&pop);
        assert_eq!(fronts, vec![vec![0, 2], vec![1]]);
        assert_eq!(fronts, brute_force_fronts(&points));
    }

    #[test]
    fn singleton_population_is_one_front() {
        let pop = pop_of(&[&[4.0, 2.0]]);
        assert_eq!(fast_nondominated_sort(&pop), vec![vec![0]]);
    }

    #[test]
    fn identical_objectives_share_a_single_front() {
        let pop = pop_of(&[&[1.0, 1.0], &[1.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(fast_nondominated_sort(&pop), vec![vec![0, 1, 2]]);
    }

    #[test]
    #[should_panic(expected = "without evaluated objectives")]
    fn unevaluated_member_panics() {
        let mut pop = pop_of(&[&[1.0, 1.0]]);
        pop.members.push(Individual::new(9));
        fast_nondominated_sort(&pop);
    }

    #[test]
    fn crowding_middle_point_of_diagonal_is_two() {
        let front = vec![v(&[1.0, 3.0]), v(&[2.0, 2.0]), v(&[3.0, 1.0])];
        let d = crowding_distance(&front);
        assert!(d[0].is_infinite() && d[2].is_infinite());
        // Hand derivation of Deb's formula: (3-1)/(3-1) + (3-1)/(3-1) = 2.
        assert!((d[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn fronts_of_size_at_most_two_are_all_infinite() {
        assert!(crowding_distance(&[v(&[1.0, 2.0])])
            .iter()
            .all(|d| d.is_infinite()));
        assert!(crowding_distance(&[v(&[1.0, 2.0]), v(&[2.0, 1.0])])
            .iter()
            .all(|d| d.is_infinite()));
    }

    #[test]
    fn identical_points_give_zero_interior_distance() {
        let front = vec![
            v(&[1.0, 1.0]),
            v(&[1.0, 1.0]),
            v(&[1.0, 1.0]),
            v(&[1.0, 1.0]),
        ];
        let d = crowding_distance(&front);
        let infinite = d.iter().filter(|x| x.is_infinite()).count();
        let zero = d.iter().filter(|x| **x == 0.0).count();
        assert_eq!(infinite, 2);
        assert_eq!(zero, 2);
    }

    proptest! {
        #[test]
        fn matches_brute_force_oracle(
            m in 2..=4usize,
            seed_points in proptest::collection::vec(
                proptest::collection::vec(0.0..10.0f64, 4), 1..50,
            ),
        ) {
            let objectives: Vec<ObjectiveVector> = seed_points
                .iter()
                .map(|p| ObjectiveVector::new(p[..m].to_vec()))
                .collect();
            let refs: Vec<&ObjectiveVector> = objectives.iter().collect();
            let fronts = sort_objectives(&refs);
            prop_assert_eq!(&fronts, &brute_force_fronts(&objectives));
            // Fronts partition the population.
            let mut seen: Vec<usize> = fronts.into_iter().flatten().collect();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..objectives.len()).collect::<Vec<_>>());
        }
    }
}
