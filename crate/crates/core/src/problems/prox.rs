//! Scalar penalties and their proximal operators.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// `sign(t) max(|t| - tau, 0)`, the proximal operator of `tau |·|`.
#[inline]
pub fn soft_threshold(t: f64, tau: f64) -> f64 {
    if t > tau {
        t - tau
    } else if t < -tau {
        t + tau
    } else {
        0.0
    }
}

/// Minimax concave penalty `ρ_{λ,γ}(t)`.
#[inline]
pub fn mcp_penalty(t: f64, lambda: f64, gamma: f64) -> f64 {
    let a = t.abs();
    if a <= gamma * lambda {
        lambda * a - t * t / (2.0 * gamma)
    } else {
        lambda * lambda * gamma / 2.0
    }
}

/// Proximal operator of `tau ρ_{λ,γ}`; single-valued when `gamma > tau`.
pub fn prox_mcp(t: f64, tau: f64, lambda: f64, gamma: f64) -> Result<f64> {
    if !(gamma > tau) {
        return Err(Error::InvalidArgument(alloc::format!(
            "MCP prox needs gamma > tau (gamma = {gamma}, tau = {tau})"
        )));
    }
    Ok(prox_mcp_unchecked(t, tau, lambda, gamma))
}

#[inline]
pub(crate) fn prox_mcp_unchecked(t: f64, tau: f64, lambda: f64, gamma: f64) -> f64 {
    let a = t.abs();
    if a <= tau * lambda {
        0.0
    } else if a <= gamma * lambda {
        t.signum() * (a - tau * lambda) / (1.0 - tau / gamma)
    } else {
        t
    }
}

/// Distance from `g` to the Fréchet subdifferential of `ρ_{λ,γ}` at `theta`.
#[inline]
pub fn mcp_subdiff_dist(theta: f64, g: f64, lambda: f64, gamma: f64) -> f64 {
    if theta == 0.0 {
        (g.abs() - lambda).max(0.0)
    } else if theta.abs() <= gamma * lambda {
        (g - (lambda * theta.signum() - theta / gamma)).abs()
    } else {
        g.abs()
    }
}

/// First-order stationarity violation for the MCP problem: the Euclidean
/// norm of `dist(-∇f(θ)_j, ∂ρ_{λ,γ}(θ_j))` over coordinates, where `grad_smooth`
/// is the gradient of the quadratic term at `theta`.
pub fn mcp_stationarity(theta: &[f64], grad_smooth: &[f64], lambda: f64, gamma: f64) -> f64 {
    let sq: f64 = theta
        .iter()
        .zip(grad_smooth)
        .map(|(&t, &g)| { let d = mcp_subdiff_dist(t, -g, lambda, gamma); d * d })
        .sum();
    libm::sqrt(sq)
}

/// Huber function `|t|_μ` and its derivative.
#[inline]
pub fn huber(t: f64, mu: f64) -> (f64, f64) {
    if t.abs() <= mu {
        (0.5 * t * t, t)
    } else {
        (mu * t.abs() - mu * mu / 2.0, mu * t.signum())
    }
}

/// Proximal operator of `tau ‖D·‖₁` (1-D total variation), computed exactly
/// by the direct taut-string algorithm.
///
/// A single forward pass keeps the current segment's admissible value range
/// `[vmin, vmax]` together with the running dual residuals; when the tube of
/// half-width `tau` is left, the segment is emitted and the scan restarts at
/// its last confirmed knot.
pub fn prox_tv1d(input: &[f64], tau: f64) -> Result<Vec<f64>> {
    if input.is_empty() {
        return Err(Error::InvalidArgument("empty input".into()));
    }
    if !(tau >= 0.0) {
        return Err(Error::InvalidArgument("tau must be non-negative".into()));
    }
    let width = input.len();
    let mut out = vec![0.0; width];
    if tau == 0.0 {
        out.copy_from_slice(input);
        return Ok(out);
    }
    let lambda = tau;
    let (mut k, mut k0) = (0usize, 0usize);
    let (mut umin, mut umax) = (lambda, -lambda);
    let (mut vmin, mut vmax) = (input[0] - lambda, input[0] + lambda);
    let (mut kplus, mut kminus) = (0usize, 0usize);
    let twolambda = 2.0 * lambda;
    let minlambda = -lambda;
    loop {
        while k == width - 1 {
            if umin < 0.0 {
                // vmin too high: negative jump
                loop {
                    out[k0] = vmin;
                    k0 += 1;
                    if k0 > kminus {
                        break;
                    }
                }
                k = k0;
                kminus = k0;
                vmin = input[k0];
                umin = lambda;
                umax = vmin + umin - vmax;
            } else if umax > 0.0 {
                // vmax too low: positive jump
                loop {
                    out[k0] = vmax;
                    k0 += 1;
                    if k0 > kplus {
                        break;
                    }
                }
                k = k0;
                kplus = k0;
                vmax = input[k0];
                umax = minlambda;
                umin = vmax + umax - vmin;
            } else {
                vmin += umin / (k - k0 + 1) as f64;
                loop {
                    out[k0] = vmin;
                    k0 += 1;
                    if k0 > k {
                        break;
                    }
                }
                return Ok(out);
            }
        }
        umin += input[k + 1] - vmin;
        if umin < minlambda {
            loop {
                out[k0] = vmin;
                k0 += 1;
                if k0 > kminus {
                    break;
                }
            }
            k = k0;
            kminus = k0;
            kplus = k0;
            vmin = input[k0];
            vmax = vmin + twolambda;
            umin = lambda;
            umax = minlambda;
            continue;
        }
        umax += input[k + 1] - vmax;
        if umax > lambda {
            loop {
                out[k0] = vmax;
                k0 += 1;
                if k0 > kplus {
                    break;
                }
            }
            k = k0;
            kminus = k0;
            kplus = k0;
            vmax = input[k0];
            vmin = vmax - twolambda;
            umin = lambda;
            umax = minlambda;
            continue;
        }
        k += 1;
        if umin >= lambda {
            kminus = k;
            vmin += (umin - lambda) / (kminus - k0 + 1) as f64;
            umin = lambda;
        }
        if umax <= minlambda {
            kplus = k;
            vmax += (umax + lambda) / (kplus - k0 + 1) as f64;
            umax = minlambda;
        }
    }
}

/// Dual certificate of a 1-D TV prox: the unique `u` with `Dᵀu = input - x`,
/// namely `u_k = Σ_{i≤k} (x_i - input_i)`.
///
/// `x` is optimal iff `‖u‖∞ ≤ tau` and `u_k = tau sign((Dx)_k)` wherever
/// `(Dx)_k ≠ 0`.
pub fn tv_dual_certificate(input: &[f64], x: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    input
        .iter()
        .zip(x)
        .take(input.len().saturating_sub(1))
        .map(|(y, xi)| {
            acc += xi - y;
            acc
        })
        .collect()
}
