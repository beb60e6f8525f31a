//! Multi-run strategy comparisons: medians, IQRs, and the
//! generations-to-threshold convergence statistic.

use std::io::Write;

use rayon::prelude::*;
use sputnik_moea::Strategy;

use crate::config::{Algorithm, RunConfig};
use crate::runner::{run_experiment, RunOutput};
use crate::BenchError;

/// Aggregate statistics for one (algorithm, strategy) cell.
#[derive(Clone, Debug)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub strategy: Strategy,
    pub runs: usize,
    pub median_final_hv: f64,
    pub iqr_final_hv: f64,
    pub median_hv_at_200: f64,
    pub iqr_hv_at_200: f64,
    /// Median generations to reach 90% of the batch-best hypervolume;
    /// `None` when at least half the runs never reach it.
    pub median_generations_to_threshold: Option<f64>,
    pub never_reached: usize,
    /// The shared threshold the statistic was computed against.
    pub threshold: f64,
}

/// Linear-interpolation percentile of a sorted slice.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    if sorted.len() == 1 {
        return sorted[0];
    }
    let position = q * (sorted.len() - 1) as f64;
    let lower = position.floor() as usize;
    let upper = position.ceil() as usize;
    let weight = position - lower as f64;
    sorted[lower] * (1.0 - weight) + sorted[upper] * weight
}

pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    percentile(&sorted, 0.5)
}

pub fn iqr(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    percentile(&sorted, 0.75) - percentile(&sorted, 0.25)
}

/// Median treating `None` ("never reached") as +infinity; `None` when the
/// median itself lands on a never-reached run.
pub fn median_generations(values: &[Option<usize>]) -> Option<f64> {
    let mut sorted: Vec<Option<usize>> = values.to_vec();
    sorted.sort_by_key(|v| v.map_or(u64::MAX, |g| g as u64));
    let n = sorted.len();
    if n == 0 {
        return None;
    }
    if n % 2 == 1 {
        sorted[n / 2].map(|g| g as f64)
    } else {
        match (sorted[n / 2 - 1], sorted[n / 2]) {
            (Some(a), Some(b)) => Some((a as f64 + b as f64) / 2.0),
            _ => None,
        }
    }
}

/// Runs every config `repeats` times (seeds `seed + 0 .. seed + repeats`)
/// and aggregates per (algorithm, strategy): median and IQR of final
/// hypervolume and of hypervolume after 200 generations, plus the median
/// generations-to-threshold against 90% of the best hypervolume. "Best" is
/// the maximum over the batch, joined with `reference_hv` when a separate
/// long reference run supplied one.
///
/// The configs must differ only in strategy, algorithm, or seed.
pub fn compare_strategies(
    configs: &[RunConfig],
    repeats: usize,
    reference_hv: Option<f64>,
) -> Result<(Vec<RunOutput>, Vec<SummaryRow>), BenchError> {
    if configs.is_empty() {
        return Err(BenchError::Config("no configs to compare".into()));
    }
    if repeats < 1 {
        return Err(BenchError::Config("repeats must be >= 1".into()));
    }
    for config in configs {
        config.validate()?;
        let base = &configs[0];
        let comparable = config.population_size == base.population_size
            && config.generations == base.generations
            && config.mutation_probability == base.mutation_probability
            && config.crossover_probability == base.crossover_probability
            && config.exploration_floor == base.exploration_floor
            && config.instance == base.instance;
        if !comparable {
            return Err(BenchError::Config(
                "compared configs may differ only in strategy, algorithm, or seed".into(),
            ));
        }
    }

    let jobs: Vec<RunConfig> = configs
        .iter()
        .flat_map(|config| {
            (0..repeats).map(move |k| config.with_seed(config.seed.wrapping_add(k as u64)))
        })
        .collect();
    let outputs: Vec<RunOutput> = jobs
        .par_iter()
        .map(run_experiment)
        .collect::<Result<_, _>>()?;

    // 90% of the best hypervolume observed anywhere in the batch.
    let best = outputs
        .iter()
        .flat_map(|o| o.trace.hypervolume_series())
        .fold(reference_hv.unwrap_or(f64::NEG_INFINITY), f64::max);
    let threshold = 0.9 * best;

    let mut cells: Vec<(Algorithm, Strategy)> = Vec::new();
    for output in &outputs {
        let cell = (output.algorithm, output.strategy);
        if !cells.contains(&cell) {
            cells.push(cell);
        }
    }

    let summaries = cells
        .into_iter()
        .map(|(algorithm, strategy)| {
            let group: Vec<&RunOutput> = outputs
                .iter()
                .filter(|o| o.algorithm == algorithm && o.strategy == strategy)
                .collect();
            let finals: Vec<f64> = group.iter().map(|o| o.trace.final_hypervolume()).collect();
            let at_200: Vec<f64> = group.iter().map(|o| o.trace.hypervolume_at(199)).collect();
            let to_threshold: Vec<Option<usize>> = group
                .iter()
                .map(|o| o.trace.generations_to_threshold(threshold))
                .collect();
            SummaryRow {
                algorithm,
                strategy,
                runs: group.len(),
                median_final_hv: median(&finals),
                iqr_final_hv: iqr(&finals),
                median_hv_at_200: median(&at_200),
                iqr_hv_at_200: iqr(&at_200),
                median_generations_to_threshold: median_generations(&to_threshold),
                never_reached: to_threshold.iter().filter(|g| g.is_none()).count(),
                threshold,
            }
        })
        .collect();

    Ok((outputs, summaries))
}

/// Writes the summary as CSV with a stable column order.
pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], writer: W) -> Result<(), BenchError> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record([
        "algorithm",
        "strategy",
        "runs",
        "median_final_hv",
        "iqr_final_hv",
        "median_hv_at_gen200",
        "iqr_hv_at_gen200",
        "median_generations_to_threshold",
        "never_reached",
        "threshold",
    ])
    .map_err(|e| BenchError::Runtime(format!("CSV error: {e}")))?;
    for row in rows {
        csv.write_record([
            row.algorithm.name().to_string(),
            row.strategy.name().to_string(),
            row.runs.to_string(),
            row.median_final_hv.to_string(),
            row.iqr_final_hv.to_string(),
            row.median_hv_at_200.to_string(),
            row.iqr_hv_at_200.to_string(),
            row.median_generations_to_threshold
                .map(|g| g.to_string())
                .unwrap_or_default(),
            row.never_reached.to_string(),
            row.threshold.to_string(),
        ])
        .map_err(|e| BenchError::Runtime(format!("CSV error: {e}")))?;
    }
    csv.flush()
        .map_err(|e| BenchError::Runtime(format!("CSV flush failed: {e}")))?;
    Ok(())
}

/// Renders the summary as an aligned text table.
pub fn summary_table(rows: &[SummaryRow]) -> String {
    let mut cells: Vec<[String; 7]> = vec![[
        "algorithm".into(),
        "strategy".into(),
        "runs".into(),
        "median final HV".into(),
        "IQR".into(),
        "median HV@200".into(),
        "median gens to 90%".into(),
    ]];
    for row in rows {
        cells.push([
            row.algorithm.name().into(),
            row.strategy.name().into(),
            row.runs.to_string(),
            format!("{:.4}", row.median_final_hv),
            format!("{:.4}", row.iqr_final_hv),
            format!("{:.4}", row.median_hv_at_200),
            row.median_generations_to_threshold
                .map(|g| format!("{g:.1}"))
                .unwrap_or_else(|| "never".into()),
        ]);
    }
    let widths: Vec<usize> = (0..7)
        .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in cells.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            out.push_str(&format!("{cell:>width$}  ", width = widths[c]));
        }
        out.push('\n');
        if i == 0 {
            let total: usize = widths.iter().map(|w| w + 2).sum();
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_and_iqr_basics() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(iqr(&[1.0, 2.0, 3.0, 4.0, 5.0]), 2.0);
    }

    #[test]
    fn median_generations_handles_never() {
        assert_eq!(
            median_generations(&[Some(10), Some(20), Some(30)]),
            Some(20.0)
        );
        assert_eq!(median_generations(&[Some(10), Some(20)]), Some(15.0));
        assert_eq!(median_generations(&[Some(10), None, None]), None);
        assert_eq!(median_generations(&[Some(10), Some(12), None]), Some(12.0));
    }
}
