//! Gradient descent, plain and with Nesterov momentum, for smooth objectives.

use alloc::vec;

use super::{Acceleration, SolverSpec};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::matrix::spectral_norm_sq;
use crate::problems::{Iterate, Objective};

struct SmoothModel<'a> {
    objective: &'a Objective,
    dataset: &'a Dataset,
}

impl SmoothModel<'_> {
    /// Gradient of the full smooth objective at `(theta, b)`.
    fn grad(&self, theta: &[f64], b: Option<f64>, z: &mut [f64], r: &mut [f64], g: &mut [f64]) -> Option<f64> {
        let x = &self.dataset.x;
        let loss = self.objective.loss(self.dataset.n_samples());
        x.matvec(theta, z);
        if let Some(b) = b {
            z.iter_mut().for_each(|v| *v += b);
        }
        loss.derivs(z, &self.dataset.y, r);
        x.rmatvec(r, g);
        let scale = loss.scale();
        for (gj, tj) in g.iter_mut().zip(theta) {
            *gj = *gj * scale + self.objective.lambda * tj;
        }
        b.map(|_| r.iter().sum::<f64>() * scale)
    }
}

pub(super) fn run_gradient(
    spec: &SolverSpec,
    objective: &Objective,
    dataset: &Dataset,
    n_iter: usize,
) -> Result<Iterate> {
    if !objective.kind.is_smooth() {
        return Err(Error::Unsupported(alloc::format!("gd needs a smooth objective, got {}", objective.kind)));
    }
    let (n, p) = (dataset.n_samples(), dataset.n_features());
    let mut it = Iterate::zeros_for(objective, p);
    if n_iter == 0 {
        return Ok(it);
    }
    let curvature = objective.loss(n).curvature();
    let mut norm_sq = spectral_norm_sq(&dataset.x)?;
    if objective.fit_intercept {
        // ‖[X 𝟙]‖² ≤ ‖X‖² + n
        norm_sq += n as f64;
    }
    let lipschitz = norm_sq * curvature + objective.lambda;
    let step = 1.0 / lipschitz;
    let model = SmoothModel { objective, dataset };
    let (mut z, mut r, mut g) = (vec![0.0; n], vec![0.0; n], vec![0.0; p]);

    match spec.acceleration {
        Acceleration::None => {
            for _ in 0..n_iter {
                let gb = model.grad(&it.theta, it.intercept, &mut z, &mut r, &mut g);
                crate::math::axpy(-step, &g, &mut it.theta);
                if let (Some(b), Some(gb)) = (it.intercept.as_mut(), gb) {
                    *b -= step * gb;
                }
            }
        }
        _ => {
            let mut y_theta = it.theta.clone();
            let mut y_b = it.intercept;
            let mut t = 1.0_f64;
            for _ in 0..n_iter {
                let gb = model.grad(&y_theta, y_b, &mut z, &mut r, &mut g);
                let t_next = (1.0 + libm::sqrt(1.0 + 4.0 * t * t)) / 2.0;
                let beta = (t - 1.0) / t_next;
                for j in 0..p {
                    let new = y_theta[j] - step * g[j];
                    y_theta[j] = new + beta * (new - it.theta[j]);
                    it.theta[j] = new;
                }
                if let (Some(b), Some(gb), Some(yb)) = (it.intercept.as_mut(), gb, y_b.as_mut()) {
                    let new = *yb - step * gb;
                    *yb = new + beta * (new - *b);
                    *b = new;
                }
                t = t_next;
            }
        }
    }
    Ok(it)
}
