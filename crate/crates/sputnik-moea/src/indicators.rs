//! Solution-quality metrics: exact 2-D hypervolume, front normalization,
//! and the generation-to-threshold convergence metric.

use crate::error::IndicatorError;
use crate::objective::ObjectiveVector;

/// Reference point for hypervolume in normalized objective space.
pub const NORMALIZED_REFERENCE: [f64; 2] = [1.1, 1.1];

/// Exact 2-D hypervolume: the area dominated by the front and bounded by
/// the reference point, summed as rectangle strips over the non-dominated
/// subset sorted on the first objective. Dominated front members contribute
/// nothing.
///
/// Higher-dimensional fronts are rejected; so is any point that fails to
/// dominate the reference point.
pub fn hypervolume_2d(
    front: &[ObjectiveVector],
    reference: [f64; 2],
) -> Result<f64, IndicatorError> {
    let reference_vector = ObjectiveVector::new(reference.to_vec());
    for point in front {
        if point.len() != 2 {
            return Err(IndicatorError::NotTwoDimensional(point.len()));
        }
        if !point.dominates(&reference_vector) {
            return Err(IndicatorError::PointBeyondReference {
                point: point.values().to_vec(),
                reference: reference.to_vec(),
            });
        }
    }
    if front.is_empty() {
        return Ok(0.0);
    }

    let mut nondominated: Vec<&ObjectiveVector> = front
        .iter()
        .filter(|p| !front.iter().any(|q| q.dominates(p)))
        .collect();
    nondominated.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .expect("objective values are finite")
            .then(
                a[1].partial_cmp(&b[1])
                    .expect("objective values are finite"),
            )
    });
    nondominated.dedup_by(|a, b| a.values() == b.values());

    let mut volume = 0.0;
    for (i, point) in nondominated.iter().enumerate() {
        let next_x = if i + 1 < nondominated.len() {
            nondominated[i + 1][0]
        } else {
            reference[0]
        };
        volume += (next_x - point[0]) * (reference[1] - point[1]);
    }
    Ok(volume)
}

/// Min-max scales a front into `[0, 1]^n` against fixed bounds. Points
/// outside the bounds are clamped; the second return value counts clamped
/// coordinates.
pub fn normalize_front(
    front: &[ObjectiveVector],
    bounds: &[(f64, f64)],
) -> Result<(Vec<ObjectiveVector>, usize), IndicatorError> {
    for (i, &(min, max)) in bounds.iter().enumerate() {
        if min.is_nan() || max.is_nan() || max <= min {
            return Err(IndicatorError::DegenerateBounds(i));
        }
    }
    let mut clamped = 0usize;
    let normalized = front
        .iter()
        .map(|point| {
            assert_eq!(point.len(), bounds.len(), "bounds/objective mismatch");
            let values = point
                .values()
                .iter()
                .zip(bounds)
                .map(|(&v, &(min, max))| {
                    let scaled = (v - min) / (max - min);
                    if !(0.0..=1.0).contains(&scaled) {
                        clamped += 1;
                    }
                    scaled.clamp(0.0, 1.0)
                })
                .collect();
            ObjectiveVector::new(values)
        })
        .collect();
    Ok((normalized, clamped))
}

/// Index of the first entry in a per-generation hypervolume series that
/// reaches `threshold`; `None` when the series never does.
pub fn generations_to_threshold(hypervolumes: &[f64], threshold: f64) -> Option<usize> {
    hypervolumes.iter().position(|&hv| hv >= threshold)
}
