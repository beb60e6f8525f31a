//! Plot-ready output: long-format CSV and an SVG chart of median
//! hypervolume per generation per strategy.

use std::collections::BTreeMap;
use std::io::Write;

use sputnik_moea::Strategy;

use crate::runner::RunOutput;
use crate::summary::median;
use crate::BenchError;

const STRATEGY_COLORS: [(&str, &str); 3] = [
    ("random", "#888888"),
    ("elitist", "#d62728"),
    ("caste", "#1f77b4"),
];

/// Median hypervolume per generation for each strategy present in `runs`.
fn median_series(runs: &[RunOutput]) -> BTreeMap<&'static str, Vec<f64>> {
    let mut series = BTreeMap::new();
    for strategy in [Strategy::Random, Strategy::Elitist, Strategy::Caste] {
        let traces: Vec<&RunOutput> = runs.iter().filter(|r| r.strategy == strategy).collect();
        if traces.is_empty() {
            continue;
        }
        let longest = traces.iter().map(|r| r.trace.rows.len()).max().unwrap_or(0);
        let medians: Vec<f64> = (0..longest)
            .map(|g| {
                let values: Vec<f64> = traces
                    .iter()
                    .filter_map(|r| r.trace.rows.get(g).map(|row| row.hypervolume))
                    .collect();
                median(&values)
            })
            .collect();
        series.insert(strategy.name(), medians);
    }
    series
}

/// Writes the long-format CSV (`strategy,seed,generation,hypervolume`) and
/// an SVG line chart of the per-strategy median hypervolume.
pub fn emit_plot_data<W1: Write, W2: Write>(
    runs: &[RunOutput],
    csv_writer: W1,
    svg_writer: W2,
) -> Result<(), BenchError> {
    if runs.is_empty() {
        return Err(BenchError::Config("no runs to plot".into()));
    }
    if runs.iter().any(|r| r.trace.rows.is_empty()) {
        return Err(BenchError::Config(
            "cannot plot an empty generation range".into(),
        ));
    }

    let mut csv = csv::Writer::from_writer(csv_writer);
    csv.write_record(["strategy", "seed", "generation", "hypervolume"])
        .map_err(|e| BenchError::Runtime(format!("CSV error: {e}")))?;
    for run in runs {
        for row in &run.trace.rows {
            csv.write_record([
                run.strategy.name().to_string(),
                run.seed.to_string(),
                row.generation.to_string(),
                row.hypervolume.to_string(),
            ])
            .map_err(|e| BenchError::Runtime(format!("CSV error: {e}")))?;
        }
    }
    csv.flush()
        .map_err(|e| BenchError::Runtime(format!("CSV flush failed: {e}")))?;

    write_svg(runs, svg_writer)
}

fn write_svg<W: Write>(runs: &[RunOutput], mut out: W) -> Result<(), BenchError> {
    let series = median_series(runs);
    let max_generation = series.values().map(|s| s.len()).max().unwrap_or(1).max(2);
    let hv_max = series
        .values()
        .flat_map(|s| s.iter().copied())
        .fold(f64::NEG_INFINITY, f64::max)
        .max(1e-9);
    let hv_min = series
        .values()
        .flat_map(|s| s.iter().copied())
        .fold(f64::INFINITY, f64::min)
        .min(hv_max - 1e-9);

    let (width, height) = (760.0, 480.0);
    let (left, right, top, bottom) = (70.0, 20.0, 20.0, 50.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;
    let x = |generation: f64| left + plot_w * generation / (max_generation - 1) as f64;
    let y = |hv: f64| top + plot_h * (1.0 - (hv - hv_min) / (hv_max - hv_min));

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{left}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        top + plot_h,
        left + plot_w,
        top + plot_h
    ));
    svg.push_str(&format!(
        "<line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{}\" stroke=\"black\"/>\n",
        top + plot_h
    ));
    for tick in 0..=4 {
        let hv = hv_min + (hv_max - hv_min) * tick as f64 / 4.0;
        let ty = y(hv);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ty}\" x2=\"{left}\" y2=\"{ty}\" stroke=\"black\"/>\n",
            left - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{hv:.3}</text>\n",
            left - 8.0,
            ty + 4.0
        ));
        let generation = ((max_generation - 1) * tick) / 4;
        let tx = x(generation as f64);
        svg.push_str(&format!(
            "<line x1=\"{tx}\" y1=\"{}\" x2=\"{tx}\" y2=\"{}\" stroke=\"black\"/>\n",
            top + plot_h,
            top + plot_h + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{tx}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{generation}</text>\n",
            top + plot_h + 20.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">Generation</text>\n",
        left + plot_w / 2.0,
        height - 10.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {})\">Hypervolume</text>\n",
        top + plot_h / 2.0,
        top + plot_h / 2.0
    ));

    // One median polyline per strategy plus a legend entry.
    let mut legend_y = top + 14.0;
    for (name, color) in STRATEGY_COLORS {
        let Some(values) = series.get(name) else {
            continue;
        };
        let points: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(g, hv)| format!("{:.2},{:.2}", x(g as f64), y(*hv)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        svg.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"14\" height=\"3\" fill=\"{color}\"/>\n",
            left + plot_w - 150.0,
            legend_y - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{legend_y}\" font-size=\"12\">{name}</text>\n",
            left + plot_w - 130.0
        ));
        legend_y += 18.0;
    }
    svg.push_str("</svg>\n");

    out.write_all(svg.as_bytes())
        .map_err(|e| BenchError::Runtime(format!("cannot write SVG: {e}")))
}
