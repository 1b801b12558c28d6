//! Flat CSV export of benchmark results.
//!
//! The file starts with a `# schema_version=N` comment line. Columns are the
//! fixed identification columns, `objective_value`, `suboptimality`, the
//! remaining metrics in sorted order, and `terminal_reason`. One row is
//! written per curve point; a run that failed gets a single row with empty
//! numeric cells.

use std::collections::BTreeMap;
use std::path::Path;

use optbench_core::bench::{format_float, parse_float, TerminalReason, SCHEMA_VERSION};
use optbench_core::problems::{OBJECTIVE_VALUE, SUBOPTIMALITY};

use crate::benchmark::BenchmarkOutput;
use crate::error::{BenchError, Result};

pub const FIXED_COLUMNS: [&str; 10] = [
    "benchmark",
    "objective_name",
    "objective_params",
    "data_name",
    "data_params",
    "solver_name",
    "solver_params",
    "idx_rep",
    "stop_value",
    "time_s",
];

pub const TERMINAL_REASON: &str = "terminal_reason";

/// One exported curve point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub benchmark: String,
    pub objective_name: String,
    pub objective_params: String,
    pub data_name: String,
    pub data_params: String,
    pub solver_name: String,
    pub solver_params: String,
    pub idx_rep: u64,
    pub stop_value: Option<f64>,
    pub time_s: Option<f64>,
    pub metrics: BTreeMap<String, f64>,
    pub terminal_reason: TerminalReason,
}

impl ResultRow {
    /// `name[params]`, the label of one curve in plots.
    pub fn solver_label(&self) -> String {
        if self.solver_params.is_empty() {
            self.solver_name.clone()
        } else {
            format!("{}[{}]", self.solver_name, self.solver_params)
        }
    }

    /// Key of the (objective variant, dataset variant) group.
    pub fn group(&self) -> (String, String, String, String) {
        (self.objective_name.clone(), self.objective_params.clone(), self.data_name.clone(), self.data_params.clone())
    }
}

/// Rows together with the metric column order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub metric_names: Vec<String>,
    pub rows: Vec<ResultRow>,
}

/// `objective_value`, `suboptimality`, then every other name sorted.
fn metric_order<'a>(names: impl IntoIterator<Item = &'a String>) -> Vec<String> {
    let mut rest: Vec<String> = names
        .into_iter()
        .filter(|n| *n != OBJECTIVE_VALUE && *n != SUBOPTIMALITY)
        .cloned()
        .collect();
    rest.sort();
    rest.dedup();
    let mut out = vec![OBJECTIVE_VALUE.to_string(), SUBOPTIMALITY.to_string()];
    out.extend(rest);
    out
}

impl ResultTable {
    pub fn from_output(output: &BenchmarkOutput) -> Self {
        let mut rows = Vec::new();
        for run in &output.runs {
            let d = &run.descriptor;
            let base = ResultRow {
                benchmark: d.benchmark.clone(),
                objective_name: d.objective.name.clone(),
                objective_params: d.objective.canonical_params(),
                data_name: d.dataset.name.clone(),
                data_params: d.dataset.canonical_params(),
                solver_name: d.solver.name.clone(),
                solver_params: d.solver.canonical_params(),
                idx_rep: d.rep,
                stop_value: None,
                time_s: None,
                metrics: BTreeMap::new(),
                terminal_reason: run.curve.terminal_reason,
            };
            if run.curve.points.is_empty() {
                rows.push(base);
                continue;
            }
            for p in &run.curve.points {
                rows.push(ResultRow {
                    stop_value: Some(p.stop_value),
                    time_s: Some(p.time_s),
                    metrics: p.metrics.clone(),
                    ..base.clone()
                });
            }
        }
        let metric_names = metric_order(rows.iter().flat_map(|r| r.metrics.keys()));
        Self { metric_names, rows }
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let header: Vec<&str> = FIXED_COLUMNS
            .iter()
            .copied()
            .chain(self.metric_names.iter().map(String::as_str))
            .chain([TERMINAL_REASON])
            .collect();
        let opt = |v: Option<f64>| v.map(format_float).unwrap_or_default();
        writer.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let mut record = vec![
                r.benchmark.clone(),
                r.objective_name.clone(),
                r.objective_params.clone(),
                r.data_name.clone(),
                r.data_params.clone(),
                r.solver_name.clone(),
                r.solver_params.clone(),
                r.idx_rep.to_string(),
                opt(r.stop_value),
                opt(r.time_s),
            ];
            record.extend(self.metric_names.iter().map(|m| opt(r.metrics.get(m).copied())));
            record.push(r.terminal_reason.as_str().to_string());
            writer.write_record(&record).expect("in-memory write");
        }
        let body = String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields");
        format!("# schema_version={SCHEMA_VERSION}\n{body}")
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let bad = |m: String| BenchError::Results(m);
        let (first, body) = text.split_once('\n').ok_or_else(|| bad("missing schema line".into()))?;
        let version = first
            .strip_prefix("# schema_version=")
            .and_then(|v| v.trim().parse::<u32>().ok())
            .ok_or_else(|| bad(format!("expected '# schema_version=N', got '{first}'")))?;
        if version != SCHEMA_VERSION {
            return Err(bad(format!("unsupported schema version {version}")));
        }
        let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let header: Vec<String> =
            reader.headers().map_err(|e| bad(e.to_string()))?.iter().map(str::to_string).collect();
        let n = header.len();
        if n < FIXED_COLUMNS.len() + 1
            || header[..FIXED_COLUMNS.len()] != FIXED_COLUMNS
            || header[n - 1] != TERMINAL_REASON
        {
            return Err(bad("unexpected column layout".into()));
        }
        let metric_names = header[FIXED_COLUMNS.len()..n - 1].to_vec();
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let line = i + 3;
            let record = record.map_err(|e| bad(format!("line {line}: {e}")))?;
            let field = |j: usize| record.get(j).unwrap_or("");
            let opt = |j: usize| -> Result<Option<f64>> {
                let s = field(j);
                if s.is_empty() {
                    Ok(None)
                } else {
                    parse_float(s).map(Some).map_err(|e| bad(format!("line {line}: {e}")))
                }
            };
            let mut metrics = BTreeMap::new();
            for (k, name) in metric_names.iter().enumerate() {
                if let Some(v) = opt(FIXED_COLUMNS.len() + k)? {
                    metrics.insert(name.clone(), v);
                }
            }
            rows.push(ResultRow {
                benchmark: field(0).into(),
                objective_name: field(1).into(),
                objective_params: field(2).into(),
                data_name: field(3).into(),
                data_params: field(4).into(),
                solver_name: field(5).into(),
                solver_params: field(6).into(),
                idx_rep: field(7).parse().map_err(|_| bad(format!("line {line}: invalid idx_rep")))?,
                stop_value: opt(8)?,
                time_s: opt(9)?,
                metrics,
                terminal_reason: field(n - 1).parse().map_err(|e| bad(format!("line {line}: {e}")))?,
            });
        }
        Ok(Self { metric_names, rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::parse_csv(&text)
    }

    /// Writes the CSV through a temporary file renamed into place.
    pub fn write(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension(format!("csv.tmp.{}", std::process::id()));
        std::fs::write(&tmp, self.to_csv()).map_err(|e| BenchError::io(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| {
            let _ = std::fs::remove_file(&tmp);
            BenchError::io(path, e)
        })
    }
}
