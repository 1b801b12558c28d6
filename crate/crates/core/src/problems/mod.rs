//! Objective functions of the six problem suites.
//!
//! | kind        | objective                                              |
//! |-------------|--------------------------------------------------------|
//! | `ridge`     | `½‖y − Xθ‖² + (λ/2)‖θ‖²`                               |
//! | `lasso`     | `½‖y − Xθ‖² + λ‖θ‖₁`                                   |
//! | `logreg_l2` | `Σ log(1 + exp(−y_i (X_iᵀθ + b))) + (λ/2)‖θ‖²`         |
//! | `logreg_l1` | `Σ log(1 + exp(−y_i X_iᵀθ)) + λ‖θ‖₁`                   |
//! | `mcp`       | `(1/2n)‖y − Xθ‖² + Σ ρ_{λ,γ}(θ_j)`                     |
//! | `tv1d`      | `F(y, Xθ) + λ‖Dθ‖₁`, `F` the ℓ2 or Huber fit           |
//!
//! The intercept `b` of `logreg_l2` is optional and never penalized.

pub mod prox;
pub mod tv;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::math::{log1p_exp_neg, sigmoid};
use crate::matrix::Design;
use prox::{huber, mcp_penalty, mcp_stationarity, mcp_subdiff_dist, soft_threshold};

pub const OBJECTIVE_VALUE: &str = "objective_value";
pub const SUBOPTIMALITY: &str = "suboptimality";
pub const GRAD_NORM: &str = "grad_norm";
pub const SUPPORT_FRACTION: &str = "support_fraction";
pub const STATIONARITY: &str = "stationarity";

/// Every metric name that can appear in results, in column order.
pub const METRIC_NAMES: [&str; 5] =
    [OBJECTIVE_VALUE, SUBOPTIMALITY, GRAD_NORM, STATIONARITY, SUPPORT_FRACTION];

/// Metric name → value. Always holds [`OBJECTIVE_VALUE`].
pub type MetricSet = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectiveKind {
    Ridge,
    Lasso,
    LogregL2,
    LogregL1,
    Mcp,
    Tv1d,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 6] = [
        ObjectiveKind::Lasso,
        ObjectiveKind::LogregL1,
        ObjectiveKind::LogregL2,
        ObjectiveKind::Mcp,
        ObjectiveKind::Ridge,
        ObjectiveKind::Tv1d,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ObjectiveKind::Ridge => "ridge",
            ObjectiveKind::Lasso => "lasso",
            ObjectiveKind::LogregL2 => "logreg_l2",
            ObjectiveKind::LogregL1 => "logreg_l1",
            ObjectiveKind::Mcp => "mcp",
            ObjectiveKind::Tv1d => "tv1d",
        }
    }

    /// Problems whose iterates are expected to be sparse.
    pub fn is_sparse_penalty(self) -> bool {
        matches!(self, ObjectiveKind::Lasso | ObjectiveKind::LogregL1 | ObjectiveKind::Mcp)
    }

    /// Problems for which the full objective is differentiable.
    pub fn is_smooth(self) -> bool {
        matches!(self, ObjectiveKind::Ridge | ObjectiveKind::LogregL2)
    }

    pub fn is_logistic(self) -> bool {
        matches!(self, ObjectiveKind::LogregL2 | ObjectiveKind::LogregL1)
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ObjectiveKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown objective kind '{s}'")))
    }
}

/// Data fidelity term of the TV problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DataFit {
    L2,
    Huber,
}

impl DataFit {
    pub fn as_str(self) -> &'static str {
        match self {
            DataFit::L2 => "l2",
            DataFit::Huber => "huber",
        }
    }
}

impl FromStr for DataFit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" => Ok(DataFit::L2),
            "huber" => Ok(DataFit::Huber),
            _ => Err(Error::Config(format!("unknown data fit '{s}' (expected l2 or huber)"))),
        }
    }
}

/// How the regularization strength is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularization {
    Value(f64),
    /// fraction of [`lambda_max`] for the dataset at hand
    FractionOfMax(f64),
}

/// A problem description before it is bound to a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub kind: ObjectiveKind,
    pub reg: Regularization,
    pub gamma: f64,
    pub mu: f64,
    pub fit: DataFit,
    pub fit_intercept: bool,
}

impl ObjectiveSpec {
    pub fn new(kind: ObjectiveKind, lambda: f64) -> Self {
        Self {
            kind,
            reg: Regularization::Value(lambda),
            gamma: 3.0,
            mu: 1.0,
            fit: DataFit::L2,
            fit_intercept: false,
        }
    }

    pub fn with_lambda_frac(kind: ObjectiveKind, frac: f64) -> Self {
        Self { reg: Regularization::FractionOfMax(frac), ..Self::new(kind, 0.0) }
    }

    pub fn gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn huber(mut self, mu: f64) -> Self {
        self.fit = DataFit::Huber;
        self.mu = mu;
        self
    }

    pub fn intercept(mut self, fit_intercept: bool) -> Self {
        self.fit_intercept = fit_intercept;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.reg {
            Regularization::Value(l) if !(l >= 0.0 && l.is_finite()) => {
                return Err(Error::Config(format!("lambda must be finite and >= 0, got {l}")));
            }
            Regularization::FractionOfMax(f) if !(f >= 0.0 && f.is_finite()) => {
                return Err(Error::Config(format!("lambda_frac must be finite and >= 0, got {f}")));
            }
            Regularization::FractionOfMax(_) if !self.kind.is_sparse_penalty() => {
                return Err(Error::Config(format!(
                    "lambda_frac is only defined for lasso, logreg_l1 and mcp, not {}",
                    self.kind
                )));
            }
            _ => {}
        }
        if self.kind == ObjectiveKind::Mcp && !(self.gamma > 1.0) {
            return Err(Error::Config(format!("mcp needs gamma > 1, got {}", self.gamma)));
        }
        if self.kind == ObjectiveKind::Tv1d && self.fit == DataFit::Huber && !(self.mu > 0.0) {
            return Err(Error::Config(format!("huber fit needs mu > 0, got {}", self.mu)));
        }
        if self.fit_intercept && self.kind != ObjectiveKind::LogregL2 {
            return Err(Error::Config("fit_intercept is only available for logreg_l2".into()));
        }
        Ok(())
    }

    /// Binds the specification to a dataset, resolving `λ`.
    pub fn resolve(&self, dataset: &Dataset) -> Result<Objective> {
        self.validate()?;
        let lambda = match self.reg {
            Regularization::Value(l) => l,
            Regularization::FractionOfMax(f) => f * lambda_max(&dataset.x, &dataset.y, self.kind)?,
        };
        if self.kind == ObjectiveKind::Tv1d && dataset.n_features() < 2 {
            return Err(Error::InvalidArgument("tv1d needs at least two features".into()));
        }
        Ok(Objective {
            kind: self.kind,
            lambda,
            gamma: self.gamma,
            mu: self.mu,
            fit: self.fit,
            fit_intercept: self.fit_intercept,
        })
    }
}

/// A problem with its regularization strength resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objective {
    pub kind: ObjectiveKind,
    pub lambda: f64,
    pub gamma: f64,
    pub mu: f64,
    pub fit: DataFit,
    pub fit_intercept: bool,
}

impl Objective {
    pub fn new(kind: ObjectiveKind, lambda: f64) -> Self {
        Self { kind, lambda, gamma: 3.0, mu: 1.0, fit: DataFit::L2, fit_intercept: false }
    }

    pub(crate) fn loss(&self, n: usize) -> Loss {
        match self.kind {
            ObjectiveKind::Ridge | ObjectiveKind::Lasso => Loss::Quadratic { scale: 1.0 },
            ObjectiveKind::Mcp => Loss::Quadratic { scale: 1.0 / n as f64 },
            ObjectiveKind::LogregL2 | ObjectiveKind::LogregL1 => Loss::Logistic,
            ObjectiveKind::Tv1d => match self.fit {
                DataFit::L2 => Loss::Quadratic { scale: 1.0 },
                DataFit::Huber => Loss::Huber { mu: self.mu },
            },
        }
    }

    /// Separable penalty; `None` for TV, whose penalty is not separable.
    pub(crate) fn penalty(&self) -> Option<Penalty> {
        match self.kind {
            ObjectiveKind::Ridge | ObjectiveKind::LogregL2 => Some(Penalty::L2 { lambda: self.lambda }),
            ObjectiveKind::Lasso | ObjectiveKind::LogregL1 => {
                Some(Penalty::L1 { lambda: self.lambda, weights: None })
            }
            ObjectiveKind::Mcp => Some(Penalty::Mcp { lambda: self.lambda, gamma: self.gamma }),
            ObjectiveKind::Tv1d => None,
        }
    }
}

/// A candidate solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Iterate {
    pub theta: Vec<f64>,
    pub intercept: Option<f64>,
}

impl Iterate {
    pub fn zeros(p: usize) -> Self {
        Self { theta: vec![0.0; p], intercept: None }
    }

    /// The all-zeros iterate, including the intercept when the objective fits one.
    pub fn zeros_for(objective: &Objective, p: usize) -> Self {
        Self { theta: vec![0.0; p], intercept: objective.fit_intercept.then_some(0.0) }
    }

    pub fn support_size(&self) -> usize {
        self.theta.iter().filter(|v| **v != 0.0).count()
    }
}

/// Gradient of the smooth part of an objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub theta: Vec<f64>,
    pub intercept: Option<f64>,
}

impl Gradient {
    pub fn norm(&self) -> f64 {
        let b = self.intercept.unwrap_or(0.0);
        libm::sqrt(crate::math::norm_sq(&self.theta) + b * b)
    }
}

/// Smooth loss `Σ_i ℓ(z_i, y_i)` of the linear predictor `z = Xθ (+ b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Loss {
    Quadratic { scale: f64 },
    Logistic,
    Huber { mu: f64 },
}

impl Loss {
    pub(crate) fn value(&self, z: &[f64], y: &[f64]) -> f64 {
        match *self {
            Loss::Quadratic { scale } => {
                let s: f64 = z.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                0.5 * scale * s
            }
            Loss::Logistic => z.iter().zip(y).map(|(zi, yi)| log1p_exp_neg(yi * zi)).sum(),
            Loss::Huber { mu } => z.iter().zip(y).map(|(zi, yi)| huber(yi - zi, mu).0).sum(),
        }
    }

    /// `∂ℓ/∂z` at a single sample. The quadratic scale is applied by the
    /// caller through [`Loss::scale`], so that gradients are `scale · Xᵀr`.
    #[inline]
    pub(crate) fn deriv_unscaled(&self, z: f64, y: f64) -> f64 {
        match *self {
            Loss::Quadratic { .. } => z - y,
            Loss::Logistic => -y * sigmoid(-y * z),
            Loss::Huber { mu } => -huber(y - z, mu).1,
        }
    }

    #[inline]
    pub(crate) fn scale(&self) -> f64 {
        match *self {
            Loss::Quadratic { scale } => scale,
            _ => 1.0,
        }
    }

    /// Upper bound of `∂²ℓ/∂z²`.
    pub(crate) fn curvature(&self) -> f64 {
        match *self {
            Loss::Quadratic { scale } => scale,
            Loss::Logistic => 0.25,
            Loss::Huber { .. } => 1.0,
        }
    }

    /// Unscaled derivatives at every sample.
    pub(crate) fn derivs(&self, z: &[f64], y: &[f64], out: &mut [f64]) {
        for ((o, &zi), &yi) in out.iter_mut().zip(z).zip(y) {
            *o = self.deriv_unscaled(zi, yi);
        }
    }
}

/// Coordinate-separable penalty.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Penalty {
    L2 { lambda: f64 },
    /// `λ Σ w_j |θ_j|`, `w ≡ 1` when `weights` is `None`
    L1 { lambda: f64, weights: Option<Vec<f64>> },
    Mcp { lambda: f64, gamma: f64 },
}

impl Penalty {
    pub(crate) fn value(&self, theta: &[f64]) -> f64 {
        match self {
            Penalty::L2 { lambda } => 0.5 * lambda * crate::math::norm_sq(theta),
            Penalty::L1 { lambda, weights: None } => lambda * theta.iter().map(|t| t.abs()).sum::<f64>(),
            Penalty::L1 { lambda, weights: Some(w) } => {
                lambda * theta.iter().zip(w).map(|(t, w)| w * t.abs()).sum::<f64>()
            }
            Penalty::Mcp { lambda, gamma } => theta.iter().map(|&t| mcp_penalty(t, *lambda, *gamma)).sum(),
        }
    }

    #[inline]
    fn l1_level(lambda: f64, weights: &Option<Vec<f64>>, j: usize) -> f64 {
        match weights {
            None => lambda,
            Some(w) => lambda * w[j],
        }
    }

    /// Proximal step `prox_{step · pen_j}(v)`.
    #[inline]
    pub(crate) fn prox(&self, j: usize, v: f64, step: f64) -> f64 {
        match self {
            Penalty::L2 { lambda } => v / (1.0 + step * lambda),
            Penalty::L1 { lambda, weights } => soft_threshold(v, step * Self::l1_level(*lambda, weights, j)),
            Penalty::Mcp { lambda, gamma } => prox::prox_mcp_unchecked(v, step, *lambda, *gamma),
        }
    }

    /// Exact minimizer over `x` of `grad·(x − θ_j) + (curv/2)(x − θ_j)² + pen_j(x)`.
    ///
    /// Thresholds are compared on the gradient scale (`|curv θ_j − grad|`
    /// against `λ`), so a coordinate whose gradient does not exceed `λ`
    /// stays exactly zero.
    #[inline]
    pub(crate) fn coordinate_step(&self, j: usize, theta_j: f64, grad: f64, curv: f64) -> f64 {
        let u = curv * theta_j - grad;
        match self {
            Penalty::L2 { lambda } => u / (curv + lambda),
            Penalty::L1 { lambda, weights } => {
                let level = Self::l1_level(*lambda, weights, j);
                soft_threshold(u, level) / curv
            }
            Penalty::Mcp { lambda, gamma } => {
                let a = u.abs();
                if a <= *lambda {
                    0.0
                } else if a <= curv * gamma * lambda {
                    u.signum() * (a - lambda) / (curv - 1.0 / gamma)
                } else {
                    u / curv
                }
            }
        }
    }

    /// Distance from `g` (the negative smooth gradient) to `∂pen_j(θ_j)`.
    #[inline]
    pub(crate) fn subdiff_dist(&self, j: usize, theta_j: f64, g: f64) -> f64 {
        match self {
            Penalty::L2 { lambda } => (g - lambda * theta_j).abs(),
            Penalty::L1 { lambda, weights } => {
                let level = Self::l1_level(*lambda, weights, j);
                if theta_j == 0.0 {
                    (g.abs() - level).max(0.0)
                } else {
                    (g - level * theta_j.signum()).abs()
                }
            }
            Penalty::Mcp { lambda, gamma } => mcp_subdiff_dist(theta_j, g, *lambda, *gamma),
        }
    }
}

fn check_dims(dataset: &Dataset, iterate: &Iterate) -> Result<()> {
    if iterate.theta.len() != dataset.n_features() {
        return Err(Error::Dimension(format!(
            "iterate has {} coefficients for {} features",
            iterate.theta.len(),
            dataset.n_features()
        )));
    }
    if dataset.y.len() != dataset.n_samples() {
        return Err(Error::Dimension("target length differs from the number of rows".into()));
    }
    Ok(())
}

/// `Xθ + b`
pub(crate) fn linear_predictor(x: &Design, theta: &[f64], intercept: Option<f64>) -> Vec<f64> {
    let mut z = x.matvec_alloc(theta);
    if let Some(b) = intercept {
        z.iter_mut().for_each(|v| *v += b);
    }
    z
}

/// Objective value only.
pub fn objective_value(objective: &Objective, dataset: &Dataset, iterate: &Iterate) -> Result<f64> {
    check_dims(dataset, iterate)?;
    let intercept = if objective.fit_intercept { iterate.intercept } else { None };
    let z = linear_predictor(&dataset.x, &iterate.theta, intercept);
    let fit = objective.loss(dataset.n_samples()).value(&z, &dataset.y);
    let pen = match objective.penalty() {
        Some(p) => p.value(&iterate.theta),
        None => {
            let tv: f64 = iterate.theta.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
            objective.lambda * tv
        }
    };
    Ok(fit + pen)
}

/// Objective value together with the problem-specific metrics.
pub fn eval_objective(objective: &Objective, dataset: &Dataset, iterate: &Iterate) -> Result<MetricSet> {
    let mut metrics = MetricSet::new();
    let value = objective_value(objective, dataset, iterate)?;
    let value = if value.is_finite() { value } else { f64::INFINITY };
    metrics.insert(OBJECTIVE_VALUE.into(), value);
    let p = dataset.n_features() as f64;
    match objective.kind {
        ObjectiveKind::Ridge | ObjectiveKind::LogregL2 => {
            let g = grad_smooth(objective, dataset, iterate)?;
            metrics.insert(GRAD_NORM.into(), g.norm());
        }
        ObjectiveKind::Lasso | ObjectiveKind::LogregL1 => {
            metrics.insert(SUPPORT_FRACTION.into(), iterate.support_size() as f64 / p);
        }
        ObjectiveKind::Mcp => {
            metrics.insert(SUPPORT_FRACTION.into(), iterate.support_size() as f64 / p);
            let g = grad_smooth(objective, dataset, iterate)?;
            metrics.insert(
                STATIONARITY.into(),
                mcp_stationarity(&iterate.theta, &g.theta, objective.lambda, objective.gamma),
            );
        }
        ObjectiveKind::Tv1d => {}
    }
    Ok(metrics)
}

/// Gradient of the smooth part of the objective.
///
/// Ridge and `logreg_l2` are smooth as a whole, so the `λθ` term is
/// included; for the other kinds the penalty is left out (for `mcp` this is
/// `(1/n) Xᵀ(Xθ − y)`). With an intercept the derivative with respect to `b`
/// is returned too.
pub fn grad_smooth(objective: &Objective, dataset: &Dataset, iterate: &Iterate) -> Result<Gradient> {
    check_dims(dataset, iterate)?;
    let x = &dataset.x;
    let intercept = if objective.fit_intercept { Some(iterate.intercept.unwrap_or(0.0)) } else { None };
    let z = linear_predictor(x, &iterate.theta, intercept);
    let loss = objective.loss(dataset.n_samples());
    let mut r = vec![0.0; z.len()];
    loss.derivs(&z, &dataset.y, &mut r);
    let mut g = x.rmatvec_alloc(&r);
    let scale = loss.scale();
    if scale != 1.0 {
        g.iter_mut().for_each(|v| *v *= scale);
    }
    if objective.kind.is_smooth() {
        crate::math::axpy(objective.lambda, &iterate.theta, &mut g);
    }
    let gb = intercept.map(|_| r.iter().sum::<f64>() * scale);
    Ok(Gradient { theta: g, intercept: gb })
}

/// Smallest `λ` for which `θ = 0` is optimal.
///
/// `lasso`: `‖Xᵀy‖∞`; `logreg_l1`: `‖Xᵀy‖∞ / 2`; `mcp`: `‖Xᵀy‖∞ / n`.
pub fn lambda_max(x: &Design, y: &[f64], kind: ObjectiveKind) -> Result<f64> {
    if x.n_rows() != y.len() {
        return Err(Error::Dimension("y length differs from rows(X)".into()));
    }
    let a = crate::math::norm_inf(&x.rmatvec_alloc(y));
    match kind {
        ObjectiveKind::Lasso => Ok(a),
        ObjectiveKind::LogregL1 => Ok(a / 2.0),
        ObjectiveKind::Mcp => Ok(a * (1.0 / x.n_rows() as f64)),
        other => Err(Error::Unsupported(format!("lambda_max is not defined for {other}"))),
    }
}

/// Label of a kind with its penalty scale, for listings.
pub fn describe(kind: ObjectiveKind) -> &'static str {
    match kind {
        ObjectiveKind::Ridge => "1/2 |y - X theta|^2 + lambda/2 |theta|^2",
        ObjectiveKind::Lasso => "1/2 |y - X theta|^2 + lambda |theta|_1",
        ObjectiveKind::LogregL2 => "sum log(1 + exp(-y_i (X_i theta + b))) + lambda/2 |theta|^2",
        ObjectiveKind::LogregL1 => "sum log(1 + exp(-y_i X_i theta)) + lambda |theta|_1",
        ObjectiveKind::Mcp => "1/(2n) |y - X theta|^2 + sum MCP_{lambda,gamma}(theta_j)",
        ObjectiveKind::Tv1d => "F(y, X theta) + lambda |D theta|_1, F in {l2, huber}",
    }
}
