//! Configurations and comparison helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use optbench::cli::{cmd_run, RunFlags, RunReport};
use optbench::results::ResultTable;

/// Seeded benchmark with one run-once solver and three-point schedules.
pub const TINY: &str = r#"
name = "tiny"

[run]
max_points = 3
seed = 7

[[objective]]
name = "ridge"
params = { reg = 1.0 }

[[objective]]
name = "lasso"
params = { lambda_frac = 0.3 }

[[dataset]]
name = "simulated"
params = { n = 20, p = 10, seed = 3 }

[[solver]]
name = "ridge_direct"

[[solver]]
name = "gd"

[[solver]]
name = "ista"
params = { acceleration = ["none", "fista"] }

[[solver]]
name = "saga_svrg"
"#;

/// Two lasso variants times five solvers: ten runs.
pub const TEN_RUNS: &str = r#"
name = "ten"

[run]
max_points = 12

[[objective]]
name = "lasso"
params = { lambda_frac = [0.5, 0.1] }

[[dataset]]
name = "simulated"
params = { n = 40, p = 30, seed = 1 }

[[solver]]
name = "ista"
params = { acceleration = ["none", "fista"] }

[[solver]]
name = "cd"
params = { working_set = [false, true] }

[[solver]]
name = "saga_svrg"
"#;

pub fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

pub fn run(config: &Path, out: &Path, flags: RunFlags) -> RunReport {
    cmd_run(config, out, &flags).unwrap()
}

/// CSV text with the `time_s` column emptied.
pub fn without_time(path: &Path) -> String {
    let mut table = ResultTable::read(path).unwrap();
    table.rows.iter_mut().for_each(|r| r.time_s = None);
    table.to_csv()
}
