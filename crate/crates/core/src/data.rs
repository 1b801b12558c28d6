//! Datasets and the simulated generators.
//!
//! All generators draw from a ChaCha8 stream seeded with the given `u64`, so
//! a `(parameters, seed)` pair always reproduces the same dataset bit for bit.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::math::norm;
use crate::matrix::{DenseMatrix, Design};

/// A design matrix, its target, and optionally the coefficients that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: Design,
    pub y: Vec<f64>,
    pub ground_truth: Option<Vec<f64>>,
    pub name: String,
    pub params: Vec<(String, String)>,
}

impl Dataset {
    pub fn new(x: impl Into<Design>, y: Vec<f64>) -> Result<Self> {
        let x = x.into();
        if x.n_rows() != y.len() {
            return Err(Error::Dimension(format!(
                "X has {} rows but y has {} entries",
                x.n_rows(),
                y.len()
            )));
        }
        Ok(Self { x, y, ground_truth: None, name: String::from("custom"), params: Vec::new() })
    }

    pub fn with_ground_truth(mut self, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != self.x.n_cols() {
            return Err(Error::Dimension("ground truth length must equal cols(X)".into()));
        }
        self.ground_truth = Some(theta);
        Ok(self)
    }

    pub fn with_meta(mut self, name: &str, params: Vec<(String, String)>) -> Self {
        self.name = name.to_string();
        self.params = params;
        self
    }

    pub fn n_samples(&self) -> usize {
        self.x.n_rows()
    }

    pub fn n_features(&self) -> usize {
        self.x.n_cols()
    }
}

fn check_common(n: usize, p: usize, rho: f64, density: f64, snr: f64) -> Result<usize> {
    if n == 0 || p == 0 {
        return Err(Error::InvalidArgument("n and p must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!("rho must lie in [0, 1), got {rho}")));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidArgument(format!("density must lie in (0, 1], got {density}")));
    }
    if !(snr > 0.0 && snr.is_finite()) {
        return Err(Error::InvalidArgument(format!("snr must be positive, got {snr}")));
    }
    let k = libm::round(density * p as f64) as usize;
    if k == 0 {
        return Err(Error::InvalidArgument(format!(
            "density {density} leaves no nonzero coefficient among {p} features"
        )));
    }
    Ok(k)
}

/// Draws rows with Toeplitz correlation `E[X_i X_j] = rho^|i-j|` through an
/// AR(1) recursion, a `round(density p)`-sparse ground truth, and noise
/// rescaled so that `‖Xθ̄‖ / ‖ε‖ = snr` holds exactly.
///
/// Returns the dataset and the (unscaled) noiseless signal `Xθ̄`.
fn linear_model(
    n: usize,
    p: usize,
    rho: f64,
    density: f64,
    snr: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(DenseMatrix, Vec<f64>, Vec<f64>, Vec<f64>)> {
    let k = check_common(n, p, rho, density, snr)?;
    let innovation = libm::sqrt(1.0 - rho * rho);
    let mut x = DenseMatrix::zeros(n, p);
    {
        let data = x.data_mut();
        for i in 0..n {
            let row = &mut data[i * p..(i + 1) * p];
            row[0] = rng.sample(StandardNormal);
            for j in 1..p {
                let e: f64 = rng.sample(StandardNormal);
                row[j] = rho * row[j - 1] + innovation * e;
            }
        }
    }
    let mut theta = vec![0.0; p];
    let mut support = sample(rng, p, k).into_vec();
    support.sort_unstable();
    for j in support {
        theta[j] = rng.sample(StandardNormal);
    }
    let design = Design::Dense(x);
    let signal = design.matvec_alloc(&theta);
    let mut noise: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let (signal_norm, noise_norm) = (norm(&signal), norm(&noise));
    if signal_norm == 0.0 || noise_norm == 0.0 {
        return Err(Error::Numerical("degenerate signal or noise draw".into()));
    }
    let scale = signal_norm / (snr * noise_norm);
    noise.iter_mut().for_each(|e| *e *= scale);
    let Design::Dense(x) = design else { unreachable!() };
    Ok((x, theta, signal, noise))
}

fn meta_common(n: usize, p: usize, rho: f64, density: f64, snr: f64, seed: u64) -> Vec<(String, String)> {
    vec![
        ("density".into(), format!("{density}")),
        ("n".into(), format!("{n}")),
        ("p".into(), format!("{p}")),
        ("rho".into(), format!("{rho}")),
        ("seed".into(), format!("{seed}")),
        ("snr".into(), format!("{snr}")),
    ]
}

/// Simulated sparse linear regression data.
pub fn gen_regression(n: usize, p: usize, rho: f64, density: f64, snr: f64, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x, theta, signal, noise) = linear_model(n, p, rho, density, snr, &mut rng)?;
    let y = signal.iter().zip(&noise).map(|(s, e)| s + e).collect();
    Ok(Dataset::new(x, y)?
        .with_ground_truth(theta)?
        .with_meta("simulated_regression", meta_common(n, p, rho, density, snr, seed)))
}

/// Simulated binary classification data: labels are `sign(Xθ̄ + ε)` with
/// `sign(0) = +1`.
pub fn gen_classification(
    n: usize,
    p: usize,
    rho: f64,
    density: f64,
    snr: f64,
    seed: u64,
) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x, theta, signal, noise) = linear_model(n, p, rho, density, snr, &mut rng)?;
    let y: Vec<f64> = signal
        .iter()
        .zip(&noise)
        .map(|(s, e)| if s + e >= 0.0 { 1.0 } else { -1.0 })
        .collect();
    if y.iter().all(|&v| v == y[0]) {
        return Err(Error::InvalidArgument("all simulated labels are identical".into()));
    }
    Ok(Dataset::new(x, y)?
        .with_ground_truth(theta)?
        .with_meta("simulated_classification", meta_common(n, p, rho, density, snr, seed)))
}

/// Piecewise-constant signal observed through a Gaussian design.
///
/// The ground truth is the cumulative sum of a jump vector with `k`
/// standard-normal jumps, so `Dθ̄` has exactly `k` nonzeros.
pub fn gen_blocks_tv(n: usize, p: usize, k: usize, noise_std: f64, seed: u64) -> Result<Dataset> {
    if n == 0 || p < 2 {
        return Err(Error::InvalidArgument("blocks signal needs n >= 1 and p >= 2".into()));
    }
    if k == 0 || k > p - 1 {
        return Err(Error::InvalidArgument(format!("number of jumps must lie in [1, {}], got {k}", p - 1)));
    }
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(Error::InvalidArgument("noise_std must be non-negative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jumps = vec![0.0; p - 1];
    let mut positions = sample(&mut rng, p - 1, k).into_vec();
    positions.sort_unstable();
    for pos in positions {
        let mut z: f64 = rng.sample(StandardNormal);
        while z == 0.0 {
            z = rng.sample(StandardNormal);
        }
        jumps[pos] = z;
    }
    let theta = crate::problems::tv::synthesis_lift(0.0, &jumps);
    let data: Vec<f64> = (0..n * p).map(|_| rng.sample(StandardNormal)).collect();
    let x = DenseMatrix::new(n, p, data)?;
    let design = Design::Dense(x);
    let mut y = design.matvec_alloc(&theta);
    for yi in y.iter_mut() {
        let e: f64 = rng.sample(StandardNormal);
        *yi += noise_std * e;
    }
    let meta = vec![
        ("k".into(), format!("{k}")),
        ("n".into(), format!("{n}")),
        ("noise_std".into(), format!("{noise_std}")),
        ("p".into(), format!("{p}")),
        ("seed".into(), format!("{seed}")),
    ];
    Ok(Dataset::new(design, y)?.with_ground_truth(theta)?.with_meta("blocks_tv", meta))
}

/// Default noise level of [`gen_blocks_tv`]: variance 0.01.
pub const BLOCKS_TV_NOISE_STD: f64 = 0.1;

/// Rescales columns to unit population standard deviation.
///
/// Dense columns are also centered. Sparse columns are only scaled, so the
/// sparsity pattern is kept. Constant columns are left untouched.
pub fn standardize(dataset: &Dataset) -> Dataset {
    let n = dataset.n_samples() as f64;
    let mut out = dataset.clone();
    match &mut out.x {
        Design::Dense(m) => {
            let (rows, cols) = (m.n_rows(), m.n_cols());
            for j in 0..cols {
                let first = m.get(0, j);
                if (0..rows).all(|i| m.get(i, j) == first) {
                    continue;
                }
                let mean = (0..rows).map(|i| m.get(i, j)).sum::<f64>() / n;
                let var = (0..rows).map(|i| { let d = m.get(i, j) - mean; d * d }).sum::<f64>() / n;
                let std = libm::sqrt(var);
                if std == 0.0 {
                    continue;
                }
                for i in 0..rows {
                    let v = (m.get(i, j) - mean) / std;
                    m.set(i, j, v);
                }
            }
        }
        Design::Sparse { csr, csc } => {
            let rows = csc.n_cols();
            let mut scale = vec![1.0; csc.n_rows()];
            for (j, s) in scale.iter_mut().enumerate() {
                let (_, vals) = csc.row(j);
                let implicit_zeros = rows - vals.len();
                let constant = if implicit_zeros > 0 {
                    vals.iter().all(|&v| v == 0.0)
                } else {
                    vals.iter().all(|&v| v == vals[0])
                };
                if constant {
                    continue;
                }
                let mean = vals.iter().sum::<f64>() / n;
                let var = (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                    + implicit_zeros as f64 * mean * mean)
                    / n;
                let std = libm::sqrt(var);
                if std > 0.0 {
                    *s = 1.0 / std;
                }
            }
            let indices = csr.indices().to_vec();
            for (v, &j) in csr.values_mut().iter_mut().zip(&indices) {
                *v *= scale[j];
            }
            *csc = csr.transpose();
        }
    }
    out
}
