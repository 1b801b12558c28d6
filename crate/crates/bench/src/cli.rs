//! The `run`, `plot` and `list` commands, independent of argument parsing.

use std::path::{Path, PathBuf};

use crate::benchmark::{execute, plan, ExecOptions};
use crate::config::load_config;
use crate::error::Result;
use crate::plot::{render_plots, PlotOptions};
use crate::registry;
use crate::results::ResultTable;
use crate::store::Store;

/// Overrides and switches of `run`.
#[derive(Debug, Clone, Default)]
pub struct RunFlags {
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub max_time: Option<f64>,
    pub dry_run: bool,
    /// checkpoint directory; defaults to the output path with extension `store`
    pub store: Option<PathBuf>,
    /// stop after this many solver executions (simulates an interruption)
    pub stop_after: Option<usize>,
}

/// What `run` did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub planned: usize,
    pub executed: usize,
    pub reused: usize,
    pub errored: usize,
    pub skipped: usize,
    pub interrupted: bool,
    pub csv_written: bool,
}

impl RunReport {
    /// Process exit code: 0 on success, 1 if a run errored, 2 if nothing
    /// could be planned, 3 if interrupted before completion.
    pub fn exit_code(&self) -> i32 {
        if self.interrupted {
            3
        } else if self.planned == 0 {
            2
        } else if self.errored > 0 {
            1
        } else {
            0
        }
    }
}

pub fn default_store_dir(out_path: &Path) -> PathBuf {
    out_path.with_extension("store")
}

pub fn cmd_run(config_path: &Path, out_path: &Path, flags: &RunFlags) -> Result<RunReport> {
    let mut config = load_config(config_path)?;
    if let Some(seed) = flags.seed {
        config.seed = seed;
    }
    if let Some(t) = flags.max_time {
        config.policy.max_run_time_s = t;
    }
    let jobs = flags.jobs.unwrap_or(config.jobs);
    let plan = plan(&config)?;
    let mut report = RunReport {
        planned: plan.runs.len(),
        executed: 0,
        reused: 0,
        errored: 0,
        skipped: plan.skipped.len(),
        interrupted: false,
        csv_written: false,
    };
    if flags.dry_run {
        return Ok(report);
    }
    if plan.runs.is_empty() {
        log::warn!("no compatible (objective, solver) pairing in the config; nothing to run");
    }
    let store_dir = flags.store.clone().unwrap_or_else(|| default_store_dir(out_path));
    let store = Store::open(&store_dir)?;
    let options = ExecOptions { jobs, store: Some(&store), max_executions: flags.stop_after, metrics_override: None };
    let output = execute(&plan, &options)?;
    report.executed = output.executed;
    report.reused = output.reused;
    report.errored = output.errored();
    report.interrupted = output.interrupted;
    if !output.interrupted {
        ResultTable::from_output(&output).write(out_path)?;
        report.csv_written = true;
    }
    Ok(report)
}

pub fn cmd_plot(csv_path: &Path, out_dir: &Path, options: &PlotOptions) -> Result<Vec<PathBuf>> {
    render_plots(&ResultTable::read(csv_path)?, out_dir, options)
}

pub fn cmd_list() -> String {
    registry::listing()
}
