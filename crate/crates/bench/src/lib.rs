//! Benchmark runner for `optbench-core`: configuration files, the run
//! executor with off-line metric evaluation, a checkpoint store for resume,
//! CSV export, SVG plots and the libsvm data format.

pub mod benchmark;
pub mod cli;
pub mod config;
pub mod error;
pub mod libsvm;
pub mod plot;
pub mod registry;
pub mod results;
pub mod runner;
pub mod store;

pub use error::{BenchError, Result};
