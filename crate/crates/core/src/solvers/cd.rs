//! Cyclic proximal coordinate descent, optionally on a growing working set.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Composite, SolverSpec};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::problems::{Iterate, Loss, Objective, ObjectiveKind, Penalty};

/// Coordinate descent state. Quadratic losses keep the residual
/// `r = y − Xθ`; the logistic loss keeps the predictor `z = Xθ`.
struct CdState<'a> {
    problem: &'a Composite<'a>,
    theta: Vec<f64>,
    curv: Vec<f64>,
    aux: Vec<f64>,
}

impl<'a> CdState<'a> {
    fn new(problem: &'a Composite<'a>) -> Result<Self> {
        let p = problem.x.n_cols();
        let factor = problem.loss.curvature();
        let curv: Vec<f64> = problem.x.col_norms_sq().into_iter().map(|c| c * factor).collect();
        if let Penalty::Mcp { gamma, .. } = problem.penalty {
            if let Some(j) = curv.iter().position(|&c| c > 0.0 && !(c * gamma > 1.0)) {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {j}: curvature {} too small for gamma = {gamma} (need curvature * gamma > 1)",
                    curv[j]
                )));
            }
        }
        let aux = match problem.loss {
            Loss::Quadratic { .. } => problem.y.to_vec(),
            _ => vec![0.0; problem.x.n_rows()],
        };
        Ok(Self { problem, theta: vec![0.0; p], curv, aux })
    }

    #[inline]
    fn grad(&self, j: usize) -> f64 {
        let x = self.problem.x;
        match self.problem.loss {
            Loss::Quadratic { scale } => -scale * x.col_dot(j, &self.aux),
            loss => {
                let (z, y) = (&self.aux, self.problem.y);
                x.col_fold(j, |i, xij| xij * loss.deriv_unscaled(z[i], y[i]))
            }
        }
    }

    #[inline]
    fn update(&mut self, j: usize) {
        let c = self.curv[j];
        if c == 0.0 {
            return;
        }
        let g = self.grad(j);
        let old = self.theta[j];
        let new = self.problem.penalty.coordinate_step(j, old, g, c);
        let delta = new - old;
        if delta != 0.0 {
            self.theta[j] = new;
            match self.problem.loss {
                Loss::Quadratic { .. } => self.problem.x.col_axpy(j, -delta, &mut self.aux),
                _ => self.problem.x.col_axpy(j, delta, &mut self.aux),
            }
        }
    }

    fn epoch(&mut self, coords: impl Iterator<Item = usize>) {
        for j in coords {
            self.update(j);
        }
    }

    #[inline]
    fn violation(&self, j: usize) -> f64 {
        self.problem.penalty.subdiff_dist(j, self.theta[j], -self.grad(j))
    }
}

/// Plain cyclic coordinate descent for `n_epochs` full sweeps.
pub(crate) fn cyclic(problem: &Composite<'_>, n_epochs: usize) -> Result<Vec<f64>> {
    let mut state = CdState::new(problem)?;
    let p = problem.x.n_cols();
    for _ in 0..n_epochs {
        state.epoch(0..p);
    }
    Ok(state.theta)
}

/// Working-set coordinate descent.
///
/// Each outer pass ranks coordinates by their optimality violation (support
/// first), solves the restricted problem until its violation drops below
/// `0.3×` the global one, then doubles the working set. `n_epochs` counts
/// sweeps over the working set.
pub(crate) fn working_set(problem: &Composite<'_>, n_epochs: usize, ws_size: usize) -> Result<Vec<f64>> {
    let mut state = CdState::new(problem)?;
    let p = problem.x.n_cols();
    let mut size = ws_size.min(p).max(1);
    let mut epochs_left = n_epochs;
    let mut violations = vec![0.0; p];
    while epochs_left > 0 {
        for (j, v) in violations.iter_mut().enumerate() {
            *v = state.violation(j);
        }
        let kkt = violations.iter().fold(0.0_f64, |m, v| m.max(*v));
        if kkt == 0.0 {
            break;
        }
        let mut order: Vec<usize> = (0..p).collect();
        let priority = |j: usize| if state.theta[j] != 0.0 { f64::INFINITY } else { violations[j] };
        order.sort_by(|&a, &b| priority(b).total_cmp(&priority(a)).then(a.cmp(&b)));
        let support = state.theta.iter().filter(|t| **t != 0.0).count();
        let take = size.max(support).min(p);
        let mut ws: Vec<usize> = order[..take].to_vec();
        ws.sort_unstable();
        let inner_tol = 0.3 * kkt;
        while epochs_left > 0 {
            state.epoch(ws.iter().copied());
            epochs_left -= 1;
            let inner = ws.iter().fold(0.0_f64, |m, &j| m.max(state.violation(j)));
            if inner <= inner_tol {
                break;
            }
        }
        size = (2 * size).min(p);
    }
    Ok(state.theta)
}

pub(super) fn run_cd(spec: &SolverSpec, objective: &Objective, dataset: &Dataset, n_epochs: usize) -> Result<Iterate> {
    if !matches!(
        objective.kind,
        ObjectiveKind::Lasso | ObjectiveKind::LogregL1 | ObjectiveKind::Ridge | ObjectiveKind::Mcp
    ) {
        return Err(Error::Unsupported(format!("cd does not support {}", objective.kind)));
    }
    let problem = Composite::from_objective(objective, dataset)?;
    let theta = if spec.working_set {
        working_set(&problem, n_epochs, spec.ws_size)?
    } else {
        cyclic(&problem, n_epochs)?
    };
    Ok(Iterate { theta, intercept: None })
}
