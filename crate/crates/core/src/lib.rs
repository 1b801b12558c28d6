//! Numerical kernel of the optbench benchmarking framework.
//!
//! Everything in this crate is pure computation over `alloc` collections:
//! matrices and simulated datasets, the objective functions with their
//! gradients and proximal operators, the built-in solver families, and the
//! IO-free half of the benchmark kernel (parameter grids, stopping schedules,
//! optimum estimation). Timing, persistence and file formats live in the
//! `optbench` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bench;
pub mod data;
pub mod error;
pub mod matrix;
pub mod problems;
pub mod solvers;

mod math;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, Design, SparseCsr};
pub use problems::{Iterate, MetricSet, Objective, ObjectiveKind, ObjectiveSpec};
