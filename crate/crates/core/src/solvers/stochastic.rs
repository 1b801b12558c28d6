//! Variance-reduced stochastic solvers (SAGA and SVRG) on the averaged
//! objective `(1/n) Σ_i ℓ_i(x_iᵀθ) + pen(θ)/n`.
//!
//! The ridge term is part of the exact gradient; the ℓ1 term goes through
//! its prox. One unit of the stop value is one pass, that is `n` sampled
//! updates.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Composite, SolverSpec, StochasticVariant};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::problems::prox::soft_threshold;
use crate::problems::{Iterate, Objective, Penalty};

struct Averaged<'a> {
    problem: Composite<'a>,
    n: usize,
    /// ridge coefficient of the averaged objective
    ridge: f64,
    /// ℓ1 coefficient before dividing by `n`
    l1: f64,
    step: f64,
}

impl Averaged<'_> {
    #[inline]
    fn sample_deriv(&self, i: usize, theta: &[f64]) -> f64 {
        let z = self.problem.x.row_dot(i, theta);
        self.problem.loss.scale() * self.problem.loss.deriv_unscaled(z, self.problem.y[i])
    }

    fn all_derivs(&self, theta: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.sample_deriv(i, theta)).collect()
    }

    fn mean_gradient(&self, derivs: &[f64]) -> Vec<f64> {
        let nf = self.n as f64;
        let mut g = self.problem.x.rmatvec_alloc(derivs);
        g.iter_mut().for_each(|v| *v /= nf);
        g
    }

    /// `θ ← prox(θ − η (diff · x_i + base + ridge θ))`
    fn step(&self, theta: &mut [f64], i: usize, diff: f64, base: &[f64], dir: &mut [f64]) {
        dir.copy_from_slice(base);
        if diff != 0.0 {
            self.problem.x.row_axpy(i, diff, dir);
        }
        let threshold = self.step * (self.l1 / self.n as f64);
        for j in 0..theta.len() {
            let g = dir[j] + self.ridge * theta[j];
            let v = theta[j] - self.step * g;
            theta[j] = if self.l1 > 0.0 { soft_threshold(v, threshold) } else { v };
        }
    }
}

pub(super) fn run_saga_svrg(
    spec: &SolverSpec,
    objective: &Objective,
    dataset: &Dataset,
    n_passes: usize,
    seed: u64,
) -> Result<Iterate> {
    let problem = Composite::from_objective(objective, dataset)?;
    let n = dataset.n_samples();
    let p = dataset.n_features();
    let nf = n as f64;
    let (ridge, l1) = match &problem.penalty {
        Penalty::L2 { lambda } => (lambda / nf, 0.0),
        Penalty::L1 { lambda, .. } => (0.0, *lambda),
        Penalty::Mcp { .. } => {
            return Err(Error::Unsupported(format!("saga_svrg does not support {}", objective.kind)));
        }
    };
    let curvature = problem.loss.curvature();
    let l_max = (0..n).map(|i| problem.x.row_norm_sq(i)).fold(0.0_f64, f64::max) * curvature + ridge;
    if !(l_max > 0.0) {
        return Ok(Iterate::zeros(p));
    }
    let avg = Averaged { problem, n, ridge, l1, step: 1.0 / (3.0 * l_max) };
    let mut theta = vec![0.0; p];
    let mut dir = vec![0.0; p];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    match spec.stochastic_variant {
        StochasticVariant::Saga => {
            let mut table = avg.all_derivs(&theta);
            let mut mean = avg.mean_gradient(&table);
            for _ in 0..n_passes {
                for _ in 0..n {
                    let i = rng.random_range(0..n);
                    let fresh = avg.sample_deriv(i, &theta);
                    let diff = fresh - table[i];
                    avg.step(&mut theta, i, diff, &mean, &mut dir);
                    if diff != 0.0 {
                        avg.problem.x.row_axpy(i, diff / nf, &mut mean);
                        table[i] = fresh;
                    }
                }
            }
        }
        StochasticVariant::Svrg => {
            for _ in 0..n_passes {
                let snapshot = avg.all_derivs(&theta);
                let mean = avg.mean_gradient(&snapshot);
                for _ in 0..n {
                    let i = rng.random_range(0..n);
                    let diff = avg.sample_deriv(i, &theta) - snapshot[i];
                    avg.step(&mut theta, i, diff, &mean, &mut dir);
                }
            }
        }
    }
    Ok(Iterate { theta, intercept: None })
}
