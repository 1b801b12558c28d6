//! Solvers for the 1-D total-variation problem: the Condat–Vũ primal-dual
//! iteration and the synthesis reformulation solved as a weighted lasso.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{cd, prox_grad, Acceleration, Composite, InnerSolver, SolverSpec};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::matrix::spectral_norm_sq;
use crate::problems::tv::{diff_adjoint, synthesis_problem};
use crate::problems::{Iterate, Loss, Objective, ObjectiveKind, Penalty};

/// Dual step; `‖D‖ ≤ 2` so this is `1 / (2‖D‖)`.
const SIGMA: f64 = 0.25;
/// Upper bound of `‖D‖²`.
const DIFF_NORM_SQ: f64 = 4.0;

pub(super) fn run_condat_vu(
    spec: &SolverSpec,
    objective: &Objective,
    dataset: &Dataset,
    n_iter: usize,
) -> Result<Iterate> {
    condat_vu_with_dual(spec, objective, dataset, n_iter).map(|(it, _)| it)
}

/// Condat–Vũ iteration returning the final dual variable `u ∈ [−λ, λ]^{p−1}`
/// along with the primal iterate.
pub fn condat_vu_with_dual(
    spec: &SolverSpec,
    objective: &Objective,
    dataset: &Dataset,
    n_iter: usize,
) -> Result<(Iterate, Vec<f64>)> {
    if objective.kind != ObjectiveKind::Tv1d {
        return Err(Error::Unsupported(format!("condat_vu does not support {}", objective.kind)));
    }
    let x = &dataset.x;
    let y = &dataset.y;
    let (n, p) = (dataset.n_samples(), dataset.n_features());
    let lambda = objective.lambda;
    let loss = objective.loss(n);
    let lipschitz = spectral_norm_sq(x)? * loss.curvature();
    let tau = 1.0 / (lipschitz + SIGMA * DIFF_NORM_SQ);

    let mut theta = vec![0.0; p];
    let mut u = vec![spec.dual_init * lambda; p - 1];
    let (mut z, mut r, mut grad, mut dtu) = (vec![0.0; n], vec![0.0; n], vec![0.0; p], vec![0.0; p]);
    let mut prev = vec![0.0; p];
    for _ in 0..n_iter {
        x.matvec(&theta, &mut z);
        loss.derivs(&z, y, &mut r);
        x.rmatvec(&r, &mut grad);
        diff_adjoint(&u, &mut dtu);
        prev.copy_from_slice(&theta);
        let scale = loss.scale();
        for j in 0..p {
            theta[j] -= tau * (scale * grad[j] + dtu[j]);
        }
        for k in 0..p - 1 {
            let extrapolated = 2.0 * (theta[k + 1] - theta[k]) - (prev[k + 1] - prev[k]);
            u[k] = (u[k] + SIGMA * extrapolated).clamp(-lambda, lambda);
        }
    }
    Ok((Iterate { theta, intercept: None }, u))
}

pub(super) fn run_synthesis(
    spec: &SolverSpec,
    objective: &Objective,
    dataset: &Dataset,
    n_iter: usize,
) -> Result<Iterate> {
    let synth = synthesis_problem(objective, dataset)?;
    let composite = Composite {
        x: &synth.design,
        y: &synth.y,
        loss: Loss::Quadratic { scale: 1.0 },
        penalty: Penalty::L1 { lambda: synth.lambda, weights: Some(synth.weights.clone()) },
    };
    let w = match spec.inner {
        InnerSolver::Cd => cd::cyclic(&composite, n_iter)?,
        InnerSolver::Fista => prox_grad::run_on_composite(&composite, n_iter, Acceleration::Fista)?,
    };
    Ok(Iterate { theta: synth.lift(&w), intercept: None })
}
