//! Benchmark configuration files (TOML).
//!
//! ```toml
//! name = "lasso-demo"
//!
//! [run]              # optional, these are the defaults
//! max_run_time_s = 100.0
//! max_points = 50
//! reps = 1
//! seed = 0
//! jobs = 1
//! growth = 1.5
//! tol_start = 0.1
//! tol_floor = 1e-15
//!
//! [[objective]]
//! name = "lasso"
//! params = { lambda_frac = [0.5, 0.1] }
//!
//! [[dataset]]
//! name = "simulated"
//! params = { n = 200, p = 100 }
//!
//! [[solver]]
//! name = "ista"
//! params = { acceleration = ["none", "fista"] }
//! ```
//!
//! A scalar parameter is shorthand for a one-element list. Unknown keys at
//! any level are errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use optbench_core::bench::{expand_grid, ParamValue, ParameterGrid, RunPolicy, StoppingStrategy, StrategyKind};
use optbench_core::problems::ObjectiveKind;
use optbench_core::solvers::Family;
use serde::Deserialize;

use crate::error::{BenchError, Result};
use crate::registry;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: String,
    #[serde(default)]
    run: RawRun,
    #[serde(default)]
    objective: Vec<RawEntry>,
    #[serde(default)]
    dataset: Vec<RawEntry>,
    #[serde(default)]
    solver: Vec<RawEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawRun {
    max_run_time_s: f64,
    max_points: usize,
    reps: u64,
    seed: u64,
    jobs: usize,
    growth: f64,
    tol_start: f64,
    tol_floor: f64,
}

impl Default for RawRun {
    fn default() -> Self {
        let policy = RunPolicy::default();
        let stop = StoppingStrategy::new(StrategyKind::Iteration);
        Self {
            max_run_time_s: policy.max_run_time_s,
            max_points: policy.max_points,
            reps: 1,
            seed: 0,
            jobs: 1,
            growth: stop.growth,
            tol_start: stop.tol_start,
            tol_floor: stop.tol_floor,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    #[serde(default)]
    params: BTreeMap<String, toml::Value>,
}

/// One section entry: a registered id and its parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry<Id> {
    pub id: Id,
    pub grid: ParameterGrid,
}

/// Schedule settings shared by every solver of a benchmark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleSettings {
    pub growth: f64,
    pub tol_start: f64,
    pub tol_floor: f64,
}

impl ScheduleSettings {
    pub fn strategy(&self, kind: StrategyKind) -> StoppingStrategy {
        StoppingStrategy { kind, growth: self.growth, tol_start: self.tol_start, tol_floor: self.tol_floor }
    }
}

/// A validated benchmark description.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub name: String,
    pub objectives: Vec<Entry<ObjectiveKind>>,
    pub datasets: Vec<Entry<String>>,
    pub solvers: Vec<Entry<Family>>,
    pub policy: RunPolicy,
    pub schedule: ScheduleSettings,
    pub reps: u64,
    pub seed: u64,
    pub jobs: usize,
    /// directory against which relative dataset paths are resolved
    pub base_dir: PathBuf,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn to_param(key: &str, v: &toml::Value) -> Result<ParamValue> {
    match v {
        toml::Value::Integer(i) => Ok(ParamValue::Int(*i)),
        toml::Value::Float(f) => Ok(ParamValue::Float(*f)),
        toml::Value::String(s) => Ok(ParamValue::Str(s.clone())),
        toml::Value::Boolean(b) => Ok(ParamValue::Bool(*b)),
        other => Err(BenchError::Config(format!(
            "parameter '{key}' must be a number, string or boolean, got {}",
            other.type_str()
        ))),
    }
}

fn to_grid(params: &BTreeMap<String, toml::Value>) -> Result<ParameterGrid> {
    let mut grid = ParameterGrid::new();
    for (key, value) in params {
        let values = match value {
            toml::Value::Array(items) => items.iter().map(|v| to_param(key, v)).collect::<Result<Vec<_>>>()?,
            scalar => vec![to_param(key, scalar)?],
        };
        grid.insert(key.clone(), values)
            .map_err(|_| BenchError::Config(format!("parameter '{key}' has an empty value list")))?;
    }
    Ok(grid)
}

/// Parses and validates a configuration. `base_dir` anchors relative paths.
pub fn parse_config(text: &str, base_dir: &Path) -> Result<BenchConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| BenchError::Parse {
        line: e.span().map(|s| line_of(text, s.start)).unwrap_or(0),
        message: e.message().to_string(),
    })?;
    for (section, len) in [("objective", raw.objective.len()), ("dataset", raw.dataset.len()), ("solver", raw.solver.len())] {
        if len == 0 {
            return Err(BenchError::Config(format!("at least one [[{section}]] entry is required")));
        }
    }
    let run = raw.run;
    if run.reps == 0 || run.jobs == 0 || run.max_points == 0 {
        return Err(BenchError::Config("reps, jobs and max_points must be at least 1".into()));
    }
    if !(run.max_run_time_s > 0.0) {
        return Err(BenchError::Config("max_run_time_s must be positive".into()));
    }
    let schedule = ScheduleSettings { growth: run.growth, tol_start: run.tol_start, tol_floor: run.tol_floor };
    schedule.strategy(StrategyKind::Iteration).validate()?;

    let mut objectives = Vec::new();
    for e in &raw.objective {
        let id = registry::parse_objective_kind(&e.name)?;
        let grid = to_grid(&e.params)?;
        for cfg in expand_grid(&grid)? {
            registry::build_objective(id, &cfg)?;
        }
        objectives.push(Entry { id, grid });
    }
    let mut datasets = Vec::new();
    for e in &raw.dataset {
        let grid = to_grid(&e.params)?;
        for cfg in expand_grid(&grid)? {
            registry::check_dataset_params(&e.name, &cfg)?;
        }
        datasets.push(Entry { id: e.name.clone(), grid });
    }
    let mut solvers = Vec::new();
    for e in &raw.solver {
        let id = registry::parse_family(&e.name)?;
        let grid = to_grid(&e.params)?;
        for cfg in expand_grid(&grid)? {
            registry::build_solver(id, &cfg)?;
        }
        solvers.push(Entry { id, grid });
    }
    Ok(BenchConfig {
        name: raw.name,
        objectives,
        datasets,
        solvers,
        policy: RunPolicy { max_run_time_s: run.max_run_time_s, max_points: run.max_points },
        schedule,
        reps: run.reps,
        seed: run.seed,
        jobs: run.jobs,
        base_dir: base_dir.to_path_buf(),
    })
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<BenchConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_config(&text, &base)
}
