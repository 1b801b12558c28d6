//! Finite differences and the synthesis (lasso) reformulation of 1-D TV.

use alloc::vec;
use alloc::vec::Vec;

use super::{DataFit, Objective, ObjectiveKind};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Design};

/// `(Dθ)_k = θ_{k+1} - θ_k`
pub fn diff_apply(theta: &[f64]) -> Vec<f64> {
    theta.windows(2).map(|w| w[1] - w[0]).collect()
}

/// `out = Dᵀu`, i.e. `out_i = u_{i-1} - u_i` with `u_0 = u_p = 0`.
pub fn diff_adjoint(u: &[f64], out: &mut [f64]) {
    let p = out.len();
    debug_assert_eq!(u.len() + 1, p);
    for i in 0..p {
        let prev = if i > 0 { u[i - 1] } else { 0.0 };
        let cur = if i < p - 1 { u[i] } else { 0.0 };
        out[i] = prev - cur;
    }
}

/// `θ_1 = c`, `θ_i = c + Σ_{k<i} z_k`; the right inverse of [`diff_apply`].
pub fn synthesis_lift(c: f64, z: &[f64]) -> Vec<f64> {
    let mut theta = Vec::with_capacity(z.len() + 1);
    let mut acc = c;
    theta.push(acc);
    for &zk in z {
        acc += zk;
        theta.push(acc);
    }
    theta
}

/// A TV-ℓ2 problem rewritten as a lasso over `(c, z)`: the design is
/// `[X𝟙 | X L]` where `L` is the cumulative-sum lift, the first coordinate
/// is unpenalized and the others carry weight `λ`.
#[derive(Debug, Clone)]
pub struct SynthesisProblem {
    pub design: Design,
    pub y: Vec<f64>,
    pub lambda: f64,
    /// per-coordinate multipliers of `λ`: 0 for the offset, 1 for jumps
    pub weights: Vec<f64>,
}

impl SynthesisProblem {
    /// Splits a synthesis vector `w = (c, z)` back into `θ`.
    pub fn lift(&self, w: &[f64]) -> Vec<f64> {
        synthesis_lift(w[0], &w[1..])
    }

    pub fn objective_value(&self, w: &[f64]) -> f64 {
        let r = self.design.matvec_alloc(w);
        let fit: f64 = r.iter().zip(&self.y).map(|(a, b)| 0.5 * (a - b) * (a - b)).sum();
        let pen: f64 = w.iter().zip(&self.weights).map(|(v, wt)| wt * v.abs()).sum();
        fit + self.lambda * pen
    }
}

/// Builds the synthesis formulation of an ℓ2-fit TV objective.
pub fn synthesis_problem(objective: &Objective, dataset: &Dataset) -> Result<SynthesisProblem> {
    if objective.kind != ObjectiveKind::Tv1d {
        return Err(Error::Unsupported("synthesis formulation needs a tv1d objective".into()));
    }
    if objective.fit != DataFit::L2 {
        return Err(Error::Unsupported("synthesis formulation only exists for the l2 fit".into()));
    }
    let x = &dataset.x;
    let (n, p) = (x.n_rows(), x.n_cols());
    if p < 2 {
        return Err(Error::InvalidArgument("tv1d needs at least two features".into()));
    }
    let dense = x.to_dense();
    // column k + 1 of the lifted design is Σ_{i > k} X_i (suffix sums of columns)
    let mut m = DenseMatrix::zeros(n, p);
    for i in 0..n {
        let row = dense.row(i);
        let mut acc = 0.0;
        for j in (1..p).rev() {
            acc += row[j];
            m.set(i, j, acc);
        }
        m.set(i, 0, acc + row[0]);
    }
    let mut weights = vec![1.0; p];
    weights[0] = 0.0;
    Ok(SynthesisProblem {
        design: Design::Dense(m),
        y: dataset.y.clone(),
        lambda: objective.lambda,
        weights,
    })
}
