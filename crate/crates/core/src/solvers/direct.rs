//! Direct ridge solvers: a Cholesky factorization and matrix-free conjugate
//! gradient on the normal equations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::math::{dot, norm};
use crate::matrix::DenseMatrix;
use crate::problems::{Iterate, Objective, ObjectiveKind};

/// Solves `A x = b` for a symmetric positive definite `A`.
pub fn cholesky_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.n_rows();
    if a.n_cols() != n || b.len() != n {
        return Err(Error::Dimension(format!(
            "cholesky_solve needs a square system, got {}x{} with rhs {}",
            a.n_rows(),
            a.n_cols(),
            b.len()
        )));
    }
    // lower factor, row-major
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return Err(Error::Numerical(format!("matrix is not positive definite (pivot {i} = {s})")));
                }
                l[i * n + i] = libm::sqrt(s);
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut x = b.to_vec();
    for i in 0..n {
        let mut s = x[i];
        for k in 0..i {
            s -= l[i * n + k] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Ok(x)
}

/// Conjugate gradient for a symmetric positive definite operator.
///
/// Stops once `‖b − A x‖ ≤ tol · ‖b‖` or after `max_iter` iterations.
/// Returns the solution and the number of iterations performed.
pub fn conjugate_gradient<F>(mut apply: F, b: &[f64], tol: f64, max_iter: usize) -> (Vec<f64>, usize)
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = b.len();
    let mut x = vec![0.0; n];
    let target = tol * norm(b);
    let mut r = b.to_vec();
    let mut rs = dot(&r, &r);
    if libm::sqrt(rs) <= target || rs == 0.0 {
        return (x, 0);
    }
    let mut d = r.clone();
    let mut ad = vec![0.0; n];
    for it in 0..max_iter {
        apply(&d, &mut ad);
        let dad = dot(&d, &ad);
        if !(dad > 0.0) {
            return (x, it);
        }
        let alpha = rs / dad;
        for i in 0..n {
            x[i] += alpha * d[i];
            r[i] -= alpha * ad[i];
        }
        let rs_new = dot(&r, &r);
        if libm::sqrt(rs_new) <= target {
            return (x, it + 1);
        }
        let beta = rs_new / rs;
        for i in 0..n {
            d[i] = r[i] + beta * d[i];
        }
        rs = rs_new;
    }
    (x, max_iter)
}

fn check_ridge(objective: &Objective) -> Result<()> {
    if objective.kind != ObjectiveKind::Ridge {
        return Err(Error::Unsupported(format!("ridge_direct does not support {}", objective.kind)));
    }
    Ok(())
}

/// Exact ridge solution. Uses the `p × p` normal equations when `p ≤ n` and
/// the `n × n` dual system `(XXᵀ + λI)α = y`, `θ = Xᵀα`, otherwise.
pub(super) fn run_cholesky(objective: &Objective, dataset: &Dataset) -> Result<Iterate> {
    check_ridge(objective)?;
    let x = dataset.x.to_dense();
    let (n, p) = (x.n_rows(), x.n_cols());
    let lambda = objective.lambda;
    let theta = if p <= n {
        let mut gram = DenseMatrix::zeros(p, p);
        for i in 0..n {
            let row = x.row(i);
            for a in 0..p {
                if row[a] == 0.0 {
                    continue;
                }
                for b in 0..=a {
                    let v = gram.get(a, b) + row[a] * row[b];
                    gram.set(a, b, v);
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                let v = gram.get(a, b);
                gram.set(b, a, v);
            }
            let v = gram.get(a, a) + lambda;
            gram.set(a, a, v);
        }
        cholesky_solve(&gram, &dataset.x.rmatvec_alloc(&dataset.y))?
    } else {
        let mut gram = DenseMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..=a {
                let v = dot(x.row(a), x.row(b)) + if a == b { lambda } else { 0.0 };
                gram.set(a, b, v);
                gram.set(b, a, v);
            }
        }
        let alpha = cholesky_solve(&gram, &dataset.y)?;
        dataset.x.rmatvec_alloc(&alpha)
    };
    Ok(Iterate { theta, intercept: None })
}

/// Ridge by conjugate gradient on `(XᵀX + λI)θ = Xᵀy`, to relative residual `tol`.
pub(super) fn run_cg(objective: &Objective, dataset: &Dataset, tol: f64) -> Result<Iterate> {
    check_ridge(objective)?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be >= 0, got {tol}")));
    }
    let x = &dataset.x;
    let lambda = objective.lambda;
    let b = x.rmatvec_alloc(&dataset.y);
    let mut tmp = vec![0.0; x.n_rows()];
    let apply = |v: &[f64], out: &mut [f64]| {
        x.matvec(v, &mut tmp);
        x.rmatvec(&tmp, out);
        for (o, vi) in out.iter_mut().zip(v) {
            *o += lambda * vi;
        }
    };
    let max_iter = 10 * x.n_cols() + 100;
    let (theta, _) = conjugate_gradient(apply, &b, tol, max_iter);
    Ok(Iterate { theta, intercept: None })
}
