//! Independent reference computations used by the tests. Nothing here calls
//! the solver or prox code under test.
#![allow(dead_code)]

use nalgebra::DMatrix;

/// Minimizer of `½(x − t)² + τ|x|` by comparing the three candidate
/// stationary points of the piecewise quadratic.
pub fn soft_threshold_oracle(t: f64, tau: f64) -> f64 {
    let f = |x: f64| 0.5 * (x - t) * (x - t) + tau * x.abs();
    let mut candidates = vec![0.0];
    if t - tau > 0.0 {
        candidates.push(t - tau);
    }
    if t + tau < 0.0 {
        candidates.push(t + tau);
    }
    candidates.into_iter().fold(0.0, |best, c| if f(c) < f(best) { c } else { best })
}

fn mcp(x: f64, lambda: f64, gamma: f64) -> f64 {
    let a = x.abs();
    if a <= gamma * lambda {
        lambda * a - x * x / (2.0 * gamma)
    } else {
        0.5 * gamma * lambda * lambda
    }
}

/// `ρ(a) − ρ(b)` without cancellation when both points share a branch.
fn mcp_diff(a: f64, b: f64, lambda: f64, gamma: f64) -> f64 {
    let k = gamma * lambda;
    let inner = |x: f64| x.abs() <= k;
    if inner(a) && inner(b) && a.signum() == b.signum() {
        lambda * (a.abs() - b.abs()) - (a - b) * (a + b) / (2.0 * gamma)
    } else if !inner(a) && !inner(b) {
        0.0
    } else {
        mcp(a, lambda, gamma) - mcp(b, lambda, gamma)
    }
}

/// Minimizer of `½(x − t)² + τ ρ_{λ,γ}(x)`: a grid with step 1e-4, then a
/// ternary search around the best grid point. Differences of the objective
/// are formed algebraically so that the search resolves well below 1e-8.
pub fn prox_mcp_oracle(t: f64, tau: f64, lambda: f64, gamma: f64) -> f64 {
    let f = |x: f64| 0.5 * (x - t) * (x - t) + tau * mcp(x, lambda, gamma);
    let h = 1e-4;
    let lo = t.min(0.0) - 1.0;
    let hi = t.max(0.0) + 1.0;
    let steps = ((hi - lo) / h).ceil() as usize;
    let mut best = 0.0;
    let mut best_val = f(0.0);
    for i in 0..=steps {
        let x = lo + i as f64 * h;
        let v = f(x);
        if v < best_val {
            best_val = v;
            best = x;
        }
    }
    // f(a) − f(b)
    let diff = |a: f64, b: f64| 0.5 * (a - b) * (a + b - 2.0 * t) + tau * mcp_diff(a, b, lambda, gamma);
    let (mut a, mut b) = (best - 2.0 * h, best + 2.0 * h);
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if diff(m1, m2) < 0.0 {
            b = m2;
        } else {
            a = m1;
        }
    }
    let mid = 0.5 * (a + b);
    // the kink at zero is a common minimizer; prefer it when it is as good
    if mid.abs() < 1e-7 && diff(0.0, mid) <= 0.0 {
        0.0
    } else {
        mid
    }
}

/// Prox of `τ‖D·‖₁` through its dual `min ½‖y − Dᵀu‖²` over `‖u‖∞ ≤ τ`,
/// solved by projected gradient with step `1/4` until the dual iterate
/// moves by less than `tol`.
pub fn prox_tv_oracle(y: &[f64], tau: f64, tol: f64) -> Vec<f64> {
    let p = y.len();
    if p < 2 {
        return y.to_vec();
    }
    let mut u = vec![0.0; p - 1];
    let primal = |u: &[f64]| -> Vec<f64> {
        (0..p)
            .map(|i| {
                let prev = if i > 0 { u[i - 1] } else { 0.0 };
                let cur = if i < p - 1 { u[i] } else { 0.0 };
                y[i] - (prev - cur)
            })
            .collect()
    };
    for _ in 0..2_000_000 {
        let x = primal(&u);
        let mut moved: f64 = 0.0;
        for k in 0..p - 1 {
            // gradient of the dual objective is −(Dx)_k
            let new = (u[k] + 0.25 * (x[k + 1] - x[k])).clamp(-tau, tau);
            moved = moved.max((new - u[k]).abs());
            u[k] = new;
        }
        if moved < tol {
            break;
        }
    }
    primal(&u)
}

/// Largest eigenvalue of `XᵀX` from a dense symmetric eigensolver.
pub fn max_eig_gram(rows: usize, cols: usize, row_major: &[f64]) -> f64 {
    let x = DMatrix::from_row_slice(rows, cols, row_major);
    let gram = x.transpose() * &x;
    gram.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Ridge solution `(XᵀX + λI)⁻¹Xᵀy` by an LU solve.
pub fn ridge_oracle(rows: usize, cols: usize, row_major: &[f64], y: &[f64], lambda: f64) -> Vec<f64> {
    let x = DMatrix::from_row_slice(rows, cols, row_major);
    let yv = nalgebra::DVector::from_column_slice(y);
    let a = x.transpose() * &x + DMatrix::identity(cols, cols) * lambda;
    let b = x.transpose() * yv;
    a.lu().solve(&b).expect("ridge system is singular").iter().cloned().collect()
}

/// Central finite-difference gradient.
pub fn finite_diff<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|j| {
            let orig = xp[j];
            xp[j] = orig + h;
            let up = f(&xp);
            xp[j] = orig - h;
            let down = f(&xp);
            xp[j] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Relative error with an absolute floor of 1 on the scale.
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let den = b.iter().map(|v| v.abs()).fold(1.0, f64::max);
    num / den
}
