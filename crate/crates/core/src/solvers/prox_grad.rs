//! Proximal gradient: ISTA, FISTA (optionally restarted on objective
//! increase) and the GIST Barzilai–Borwein variant for MCP.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Acceleration, Composite, Restart, SolverSpec, StepRule};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::matrix::{spectral_norm_sq, Design};
use crate::problems::prox::prox_tv1d;
use crate::problems::{Iterate, Loss, Objective, ObjectiveKind, Penalty};

/// Non-smooth term handled through its proximal operator.
pub(crate) enum ProxTerm<'a> {
    Separable(&'a Penalty),
    Tv { lambda: f64 },
}

impl ProxTerm<'_> {
    fn value(&self, theta: &[f64]) -> f64 {
        match self {
            ProxTerm::Separable(p) => p.value(theta),
            ProxTerm::Tv { lambda } => lambda * theta.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>(),
        }
    }

    fn prox_into(&self, v: &[f64], step: f64, out: &mut [f64]) -> Result<()> {
        match self {
            ProxTerm::Separable(p) => {
                for (j, (o, &vj)) in out.iter_mut().zip(v).enumerate() {
                    *o = p.prox(j, vj, step);
                }
            }
            ProxTerm::Tv { lambda } => out.copy_from_slice(&prox_tv1d(v, step * lambda)?),
        }
        Ok(())
    }
}

/// Smooth loss over a linear model plus a proximable term.
pub(crate) struct ProxProblem<'a> {
    pub x: &'a Design,
    pub y: &'a [f64],
    pub loss: Loss,
    pub term: ProxTerm<'a>,
}

struct Workspace {
    z: Vec<f64>,
    r: Vec<f64>,
}

impl ProxProblem<'_> {
    fn smooth_value(&self, theta: &[f64], ws: &mut Workspace) -> f64 {
        self.x.matvec(theta, &mut ws.z);
        self.loss.value(&ws.z, self.y)
    }

    fn value(&self, theta: &[f64], ws: &mut Workspace) -> f64 {
        self.smooth_value(theta, ws) + self.term.value(theta)
    }

    fn grad(&self, theta: &[f64], ws: &mut Workspace, out: &mut [f64]) {
        self.x.matvec(theta, &mut ws.z);
        self.loss.derivs(&ws.z, self.y, &mut ws.r);
        self.x.rmatvec(&ws.r, out);
        let scale = self.loss.scale();
        if scale != 1.0 {
            out.iter_mut().for_each(|v| *v *= scale);
        }
    }

    fn workspace(&self) -> Workspace {
        Workspace { z: vec![0.0; self.x.n_rows()], r: vec![0.0; self.x.n_rows()] }
    }

    /// Lipschitz constant of the smooth gradient.
    pub(crate) fn lipschitz(&self) -> Result<f64> {
        Ok(spectral_norm_sq(self.x)? * self.loss.curvature())
    }
}

/// ISTA / FISTA from zero with a fixed step `1/L`.
pub(crate) fn forward_backward(
    problem: &ProxProblem<'_>,
    n_iter: usize,
    acceleration: Acceleration,
    restart: Restart,
    lipschitz: f64,
) -> Result<Vec<f64>> {
    let p = problem.x.n_cols();
    let mut theta = vec![0.0; p];
    if n_iter == 0 {
        return Ok(theta);
    }
    let step = 1.0 / lipschitz;
    let mut ws = problem.workspace();
    let mut grad = vec![0.0; p];
    let mut v = vec![0.0; p];
    let mut next = vec![0.0; p];
    if acceleration == Acceleration::None {
        for _ in 0..n_iter {
            problem.grad(&theta, &mut ws, &mut grad);
            for j in 0..p {
                v[j] = theta[j] - step * grad[j];
            }
            problem.term.prox_into(&v, step, &mut theta)?;
        }
        return Ok(theta);
    }

    let restarting = restart == Restart::ObjectiveIncrease;
    let mut extrapolated = theta.clone();
    let mut t = 1.0_f64;
    let mut f_current = if restarting { problem.value(&theta, &mut ws) } else { 0.0 };
    for _ in 0..n_iter {
        problem.grad(&extrapolated, &mut ws, &mut grad);
        for j in 0..p {
            v[j] = extrapolated[j] - step * grad[j];
        }
        problem.term.prox_into(&v, step, &mut next)?;
        if restarting {
            let f_next = problem.value(&next, &mut ws);
            if f_next > f_current {
                // reject the step and drop the momentum
                t = 1.0;
                extrapolated.copy_from_slice(&theta);
                continue;
            }
            f_current = f_next;
        }
        let t_next = (1.0 + libm::sqrt(1.0 + 4.0 * t * t)) / 2.0;
        let beta = (t - 1.0) / t_next;
        for j in 0..p {
            extrapolated[j] = next[j] + beta * (next[j] - theta[j]);
        }
        core::mem::swap(&mut theta, &mut next);
        t = t_next;
    }
    Ok(theta)
}

/// GIST: proximal gradient with Barzilai–Borwein steps and monotone
/// backtracking (step halved until the objective does not increase).
fn gist(problem: &ProxProblem<'_>, n_iter: usize, lipschitz: f64, max_step: f64) -> Result<Vec<f64>> {
    let p = problem.x.n_cols();
    let mut theta = vec![0.0; p];
    if n_iter == 0 {
        return Ok(theta);
    }
    let base = 1.0 / lipschitz;
    let (lo, hi) = (1e-10 * base, (1e10 * base).min(max_step));
    let mut ws = problem.workspace();
    let mut grad = vec![0.0; p];
    let mut grad_new = vec![0.0; p];
    let mut v = vec![0.0; p];
    let mut candidate = vec![0.0; p];
    problem.grad(&theta, &mut ws, &mut grad);
    let mut f = problem.value(&theta, &mut ws);
    let mut step = base.min(hi);
    for _ in 0..n_iter {
        let mut accepted = false;
        for _ in 0..64 {
            for j in 0..p {
                v[j] = theta[j] - step * grad[j];
            }
            problem.term.prox_into(&v, step, &mut candidate)?;
            let f_new = problem.value(&candidate, &mut ws);
            if f_new <= f {
                f = f_new;
                accepted = true;
                break;
            }
            step /= 2.0;
        }
        if !accepted {
            break;
        }
        problem.grad(&candidate, &mut ws, &mut grad_new);
        let mut ss = 0.0;
        let mut sy = 0.0;
        for j in 0..p {
            let ds = candidate[j] - theta[j];
            ss += ds * ds;
            sy += ds * (grad_new[j] - grad[j]);
        }
        core::mem::swap(&mut theta, &mut candidate);
        core::mem::swap(&mut grad, &mut grad_new);
        step = if sy > 0.0 && ss > 0.0 { (ss / sy).clamp(lo, hi) } else { base.min(hi) };
    }
    Ok(theta)
}

pub(super) fn run_ista(
    spec: &SolverSpec,
    objective: &Objective,
    dataset: &Dataset,
    n_iter: usize,
) -> Result<Iterate> {
    let penalty = objective.penalty();
    let term = match (objective.kind, &penalty) {
        (ObjectiveKind::Tv1d, _) => ProxTerm::Tv { lambda: objective.lambda },
        (ObjectiveKind::Lasso | ObjectiveKind::LogregL1 | ObjectiveKind::Mcp, Some(p)) => ProxTerm::Separable(p),
        _ => return Err(Error::Unsupported(format!("ista does not support {}", objective.kind))),
    };
    let problem = ProxProblem {
        x: &dataset.x,
        y: &dataset.y,
        loss: objective.loss(dataset.n_samples()),
        term,
    };
    let lipschitz = problem.lipschitz()?;
    if objective.kind == ObjectiveKind::Mcp && !(objective.gamma > 1.0 / lipschitz) {
        return Err(Error::InvalidArgument(format!(
            "step 1/L = {} must stay below gamma = {} for the MCP prox",
            1.0 / lipschitz,
            objective.gamma
        )));
    }
    let theta = match spec.step_rule {
        StepRule::BbGist => gist(&problem, n_iter, lipschitz, 0.9 * objective.gamma)?,
        StepRule::Fixed => forward_backward(&problem, n_iter, spec.acceleration, spec.restart, lipschitz)?,
    };
    Ok(Iterate { theta, intercept: None })
}

/// Proximal gradient on a composite problem; used by the synthesis solver.
pub(crate) fn run_on_composite(
    composite: &Composite<'_>,
    n_iter: usize,
    acceleration: Acceleration,
) -> Result<Vec<f64>> {
    let problem = ProxProblem {
        x: composite.x,
        y: composite.y,
        loss: composite.loss,
        term: ProxTerm::Separable(&composite.penalty),
    };
    let lipschitz = problem.lipschitz()?;
    forward_backward(&problem, n_iter, acceleration, Restart::None, lipschitz)
}
