mod oracles;

use optbench_core::problems::prox::{
    huber, mcp_penalty, prox_mcp, prox_tv1d, soft_threshold, tv_dual_certificate,
};
use optbench_core::problems::tv::diff_apply;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn soft_threshold_examples() {
    assert_eq!(soft_threshold(3.0, 1.0), 2.0);
    assert_eq!(soft_threshold(-0.5, 1.0), 0.0);
    for t in [-2.0, 0.0, 0.3, 7.5] {
        assert_eq!(soft_threshold(t, 0.0), t);
    }
}

#[test]
fn prox_mcp_examples_match_grid_oracle() {
    for (t, expected) in [(0.5, 0.0), (2.0, 1.5), (4.0, 4.0)] {
        let got = prox_mcp(t, 1.0, 1.0, 3.0).unwrap();
        let oracle = oracles::prox_mcp_oracle(t, 1.0, 1.0, 3.0);
        assert!((got - expected).abs() < 1e-12, "t={t}: {got}");
        assert!((oracle - expected).abs() < 1e-8, "oracle t={t}: {oracle}");
    }
}

#[test]
fn prox_mcp_rejects_dominating_concavity() {
    assert!(prox_mcp(1.0, 3.0, 1.0, 3.0).is_err());
    assert!(prox_mcp(1.0, 4.0, 1.0, 3.0).is_err());
}

#[test]
fn prox_mcp_random_against_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let lambda = rng.random_range(0.1..2.0);
        let gamma = rng.random_range(1.5..5.0);
        let tau = rng.random_range(0.05..0.95) * gamma;
        let t = rng.random_range(-3.0..3.0) * gamma * lambda;
        let got = prox_mcp(t, tau, lambda, gamma).unwrap();
        let oracle = oracles::prox_mcp_oracle(t, tau, lambda, gamma);
        assert!((got - oracle).abs() < 1e-8, "t={t} tau={tau} l={lambda} g={gamma}: {got} vs {oracle}");
    }
}

#[test]
fn mcp_penalty_is_flat_beyond_gamma_lambda() {
    let (l, g) = (0.7, 2.5);
    assert_eq!(mcp_penalty(10.0, l, g), mcp_penalty(-4.0, l, g));
    assert!((mcp_penalty(g * l, l, g) - g * l * l / 2.0).abs() < 1e-15);
}

#[test]
fn huber_examples() {
    assert_eq!(huber(0.5, 1.0), (0.125, 0.5));
    assert_eq!(huber(2.0, 1.0), (1.5, 1.0));
    for mu in [0.1, 1.0, 3.0] {
        let inside = 0.5 * mu * mu;
        let outside = mu * mu - mu * mu / 2.0;
        assert!((huber(mu, mu).0 - inside).abs() < 1e-15);
        assert!((inside - outside).abs() < 1e-15);
    }
}

#[test]
fn prox_tv_examples() {
    assert_eq!(prox_tv1d(&[2.0, 2.0, 2.0], 5.0).unwrap(), vec![2.0, 2.0, 2.0]);
    let half = prox_tv1d(&[1.0, -1.0], 0.5).unwrap();
    assert!((half[0] - 0.5).abs() < 1e-15 && (half[1] + 0.5).abs() < 1e-15);
    for tau in [1.0, 3.0] {
        let flat = prox_tv1d(&[1.0, -1.0], tau).unwrap();
        assert!(flat.iter().all(|v| v.abs() < 1e-15), "{flat:?}");
    }
    let oracle = oracles::prox_tv_oracle(&[1.0, -1.0], 0.5, 1e-14);
    assert!((oracle[0] - 0.5).abs() < 1e-12);
    assert_eq!(prox_tv1d(&[1.0, 4.0, -2.0], 0.0).unwrap(), vec![1.0, 4.0, -2.0]);
    assert!(prox_tv1d(&[], 1.0).is_err());
}

#[test]
fn prox_tv_random_against_dual_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let p = rng.random_range(1..25);
        let y: Vec<f64> = (0..p).map(|_| rng.random_range(-3.0..3.0)).collect();
        let tau = rng.random_range(0.0..2.0);
        let got = prox_tv1d(&y, tau).unwrap();
        let oracle = oracles::prox_tv_oracle(&y, tau, 1e-14);
        let err = got.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-8, "p={p} tau={tau}: error {err}");
    }
}

fn tv_certificate_holds(y: &[f64], tau: f64) -> bool {
    let x = prox_tv1d(y, tau).unwrap();
    let u = tv_dual_certificate(y, &x);
    let dx = diff_apply(&x);
    // u holds partial sums of x − y, so Dᵀu = y − x once the total residual vanishes
    let total: f64 = y.iter().zip(&x).map(|(a, b)| a - b).sum();
    let scale = 1.0 + y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let eps = 1e-9 * scale;
    total.abs() <= eps * y.len() as f64
        && u.iter().all(|uk| uk.abs() <= tau + eps)
        && u.iter().zip(&dx).all(|(uk, d)| *d == 0.0 || (uk - tau * d.signum()).abs() <= eps)
}

proptest! {
    #[test]
    fn soft_threshold_matches_oracle(t in -10.0..10.0f64, tau in 0.0..5.0f64) {
        prop_assert!((soft_threshold(t, tau) - oracles::soft_threshold_oracle(t, tau)).abs() < 1e-12);
    }

    #[test]
    fn soft_threshold_nonexpansive(a in -10.0..10.0f64, b in -10.0..10.0f64, tau in 0.0..5.0f64) {
        let slack = 4.0 * f64::EPSILON * (a.abs() + b.abs() + tau);
        prop_assert!((soft_threshold(a, tau) - soft_threshold(b, tau)).abs() <= (a - b).abs() + slack);
    }

    #[test]
    fn prox_tv_nonexpansive(
        a in prop::collection::vec(-5.0..5.0f64, 2..30),
        shift in prop::collection::vec(-1.0..1.0f64, 30),
        tau in 0.0..3.0f64,
    ) {
        let b: Vec<f64> = a.iter().zip(&shift).map(|(x, s)| x + s).collect();
        let pa = prox_tv1d(&a, tau).unwrap();
        let pb = prox_tv1d(&b, tau).unwrap();
        let d_in: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum();
        let d_out: f64 = pa.iter().zip(&pb).map(|(x, y)| (x - y) * (x - y)).sum();
        prop_assert!(d_out.sqrt() <= d_in.sqrt() + 1e-12);
    }

    #[test]
    fn prox_tv_dual_certificate(y in prop::collection::vec(-5.0..5.0f64, 1..40), tau in 0.0..3.0f64) {
        prop_assert!(tv_certificate_holds(&y, tau));
    }

    #[test]
    fn prox_tv_constant_input_unchanged(c in -5.0..5.0f64, p in 1usize..20, tau in 0.0..10.0f64) {
        let out = prox_tv1d(&vec![c; p], tau).unwrap();
        prop_assert!(out.iter().all(|v| (v - c).abs() < 1e-12));
    }
}
