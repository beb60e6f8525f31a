//! Per-generation run traces and their CSV serialization.
//!
//! Column order is fixed: `generation, hypervolume, best_cost, mean_cost,
//! best_latency, mean_latency`, one `count_<op>` column per operator in
//! pool order, then one `delta_<op>` column per operator. Delta columns are
//! empty until the operator has completed a generation.

use std::io::{Read, Write};

use crate::BenchError;

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub generation: usize,
    pub hypervolume: f64,
    pub best_cost: f64,
    pub mean_cost: f64,
    pub best_latency: f64,
    pub mean_latency: f64,
    /// Mutation applications per operator during this generation.
    pub operator_counts: Vec<u32>,
    /// Delta impact per operator after this generation closed.
    pub operator_impacts: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub operator_ids: Vec<String>,
    pub rows: Vec<TraceRow>,
}

impl RunTrace {
    pub fn hypervolume_series(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.hypervolume).collect()
    }

    pub fn final_hypervolume(&self) -> f64 {
        self.rows.last().map(|r| r.hypervolume).unwrap_or(0.0)
    }

    /// Hypervolume after `generation + 1` generational steps, saturating at
    /// the last recorded row.
    pub fn hypervolume_at(&self, generation: usize) -> f64 {
        let index = generation.min(self.rows.len().saturating_sub(1));
        self.rows[index].hypervolume
    }

    /// Index of the first generation whose hypervolume reaches `threshold`;
    /// `None` when the run never does.
    pub fn generations_to_threshold(&self, threshold: f64) -> Option<usize> {
        self.rows
            .iter()
            .position(|row| row.hypervolume >= threshold)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), BenchError> {
        let mut csv = csv::Writer::from_writer(writer);
        let mut header = vec![
            "generation".to_string(),
            "hypervolume".to_string(),
            "best_cost".to_string(),
            "mean_cost".to_string(),
            "best_latency".to_string(),
            "mean_latency".to_string(),
        ];
        header.extend(self.operator_ids.iter().map(|id| format!("count_{id}")));
        header.extend(self.operator_ids.iter().map(|id| format!("delta_{id}")));
        csv.write_record(&header).map_err(csv_error)?;
        for row in &self.rows {
            let mut record = vec![
                row.generation.to_string(),
                row.hypervolume.to_string(),
                row.best_cost.to_string(),
                row.mean_cost.to_string(),
                row.best_latency.to_string(),
                row.mean_latency.to_string(),
            ];
            record.extend(row.operator_counts.iter().map(|c| c.to_string()));
            record.extend(row.operator_impacts.iter().map(|d| match d {
                Some(value) => value.to_string(),
                None => String::new(),
            }));
            csv.write_record(&record).map_err(csv_error)?;
        }
        csv.flush()
            .map_err(|e| BenchError::Runtime(format!("CSV flush failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String, BenchError> {
        let mut buffer = Vec::new();
        self.write_csv(&mut buffer)?;
        String::from_utf8(buffer).map_err(|e| BenchError::Runtime(e.to_string()))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, BenchError> {
        let mut csv = csv::Reader::from_reader(reader);
        let header = csv.headers().map_err(csv_error)?.clone();
        let columns: Vec<&str> = header.iter().collect();
        if columns.len() < 6
            || columns[..6]
                != [
                    "generation",
                    "hypervolume",
                    "best_cost",
                    "mean_cost",
                    "best_latency",
                    "mean_latency",
                ]
        {
            return Err(BenchError::Runtime(format!(
                "unexpected trace header: {columns:?}"
            )));
        }
        let operator_ids: Vec<String> = columns[6..]
            .iter()
            .take_while(|c| c.starts_with("count_"))
            .map(|c| c["count_".len()..].to_string())
            .collect();
        let expected = 6 + 2 * operator_ids.len();
        if columns.len() != expected {
            return Err(BenchError::Runtime(format!(
                "trace header has {} columns, expected {expected}",
                columns.len()
            )));
        }

        let mut rows = Vec::new();
        for record in csv.records() {
            let record = record.map_err(csv_error)?;
            let field = |i: usize| -> &str { record.get(i).unwrap_or("") };
            let parse_f64 = |i: usize| -> Result<f64, BenchError> {
                field(i)
                    .parse()
                    .map_err(|e| BenchError::Runtime(format!("bad trace value: {e}")))
            };
            let n_ops = operator_ids.len();
            let mut operator_counts = Vec::with_capacity(n_ops);
            for i in 0..n_ops {
                operator_counts.push(
                    field(6 + i)
                        .parse()
                        .map_err(|e| BenchError::Runtime(format!("bad operator count: {e}")))?,
                );
            }
            let mut operator_impacts = Vec::with_capacity(n_ops);
            for i in 0..n_ops {
                let raw = field(6 + n_ops + i);
                operator_impacts.push(if raw.is_empty() {
                    None
                } else {
                    Some(
                        raw.parse()
                            .map_err(|e| BenchError::Runtime(format!("bad operator delta: {e}")))?,
                    )
                });
            }
            rows.push(TraceRow {
                generation: field(0)
                    .parse()
                    .map_err(|e| BenchError::Runtime(format!("bad generation: {e}")))?,
                hypervolume: parse_f64(1)?,
                best_cost: parse_f64(2)?,
                mean_cost: parse_f64(3)?,
                best_latency: parse_f64(4)?,
                mean_latency: parse_f64(5)?,
                operator_counts,
                operator_impacts,
            });
        }
        Ok(RunTrace { operator_ids, rows })
    }
}

fn csv_error(e: csv::Error) -> BenchError {
    BenchError::Runtime(format!("CSV error: {e}"))
}
