//! Built-in solver families.
//!
//! Every solver starts from `θ = 0` and is a pure function of
//! `(spec, objective, dataset, stop value, seed)`. Which family may run on
//! which objective is fixed by [`supports`].

mod cd;
mod direct;
mod gradient;
mod prox_grad;
mod stochastic;
mod tv;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bench::{StopValue, StrategyKind};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::matrix::Design;
use crate::problems::{DataFit, Iterate, Loss, Objective, ObjectiveKind, Penalty};

pub use direct::{cholesky_solve, conjugate_gradient};
pub use tv::condat_vu_with_dual;

macro_rules! string_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => {
                        let options: Vec<&str> = $name::ALL.iter().map(|v| v.as_str()).collect();
                        Err(Error::Config(format!(
                            "invalid {} '{s}' (expected one of: {})",
                            stringify!($name),
                            options.join(", ")
                        )))
                    }
                }
            }
        }
    };
}

string_enum!(
    /// Solver family identifier, as written in configs and CSV files.
    Family {
        Cd => "cd",
        CondatVu => "condat_vu",
        Gd => "gd",
        Ista => "ista",
        RidgeDirect => "ridge_direct",
        SagaSvrg => "saga_svrg",
        Synthesis => "synthesis",
    }
);

string_enum!(Acceleration { None => "none", Nesterov => "nesterov", Fista => "fista" });
string_enum!(Restart { None => "none", ObjectiveIncrease => "objective_increase" });
string_enum!(StepRule { Fixed => "fixed", BbGist => "bb_gist" });
string_enum!(StochasticVariant { Saga => "saga", Svrg => "svrg" });
string_enum!(DirectMethod { Cholesky => "cholesky", Cg => "cg" });
string_enum!(InnerSolver { Cd => "cd", Fista => "fista" });

/// Static compatibility table between solver families and objective kinds.
pub fn supports(family: Family, kind: ObjectiveKind) -> bool {
    use ObjectiveKind::*;
    match family {
        Family::Gd => matches!(kind, Ridge | LogregL2),
        Family::Ista => matches!(kind, Lasso | LogregL1 | Mcp | Tv1d),
        Family::Cd => matches!(kind, Lasso | LogregL1 | Ridge | Mcp),
        Family::SagaSvrg => matches!(kind, LogregL2 | LogregL1 | Ridge | Lasso),
        Family::RidgeDirect => matches!(kind, Ridge),
        Family::CondatVu | Family::Synthesis => matches!(kind, Tv1d),
    }
}

/// Capability flags of a configured solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    pub smooth_only: bool,
    pub needs_prox: bool,
    pub supports_sparse: bool,
    pub supports_intercept: bool,
    pub strategy: StrategyKind,
}

/// A solver family with its variant parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSpec {
    pub family: Family,
    pub acceleration: Acceleration,
    pub restart: Restart,
    pub step_rule: StepRule,
    pub working_set: bool,
    pub ws_size: usize,
    pub stochastic_variant: StochasticVariant,
    pub direct_method: DirectMethod,
    pub inner: InnerSolver,
    /// Condat–Vũ dual initialization, as a fraction of `λ` in `[-1, 1]`
    pub dual_init: f64,
}

impl SolverSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            acceleration: Acceleration::None,
            restart: Restart::None,
            step_rule: StepRule::Fixed,
            working_set: false,
            ws_size: 100,
            stochastic_variant: StochasticVariant::Saga,
            direct_method: DirectMethod::Cholesky,
            inner: InnerSolver::Cd,
            dual_init: 0.0,
        }
    }

    pub fn accelerated(mut self, acceleration: Acceleration) -> Self {
        self.acceleration = acceleration;
        self
    }

    pub fn restart(mut self, restart: Restart) -> Self {
        self.restart = restart;
        self
    }

    pub fn step_rule(mut self, rule: StepRule) -> Self {
        self.step_rule = rule;
        self
    }

    pub fn working_set(mut self, enabled: bool) -> Self {
        self.working_set = enabled;
        self
    }

    pub fn stochastic(mut self, variant: StochasticVariant) -> Self {
        self.stochastic_variant = variant;
        self
    }

    pub fn direct(mut self, method: DirectMethod) -> Self {
        self.direct_method = method;
        self
    }

    pub fn inner(mut self, inner: InnerSolver) -> Self {
        self.inner = inner;
        self
    }

    pub fn capabilities(&self) -> Capabilities {
        let strategy = match (self.family, self.direct_method) {
            (Family::RidgeDirect, DirectMethod::Cholesky) => StrategyKind::RunOnce,
            (Family::RidgeDirect, DirectMethod::Cg) => StrategyKind::Tolerance,
            _ => StrategyKind::Iteration,
        };
        Capabilities {
            smooth_only: self.family == Family::Gd,
            needs_prox: matches!(self.family, Family::Ista | Family::Synthesis),
            supports_sparse: true,
            supports_intercept: self.family == Family::Gd,
            strategy,
        }
    }

    /// Checks variant parameters against the family.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("{what} is not valid for family {}", self.family)));
        match self.family {
            Family::Gd if self.acceleration == Acceleration::Fista => return bad("acceleration=fista"),
            Family::Ista if self.acceleration == Acceleration::Nesterov => {
                return bad("acceleration=nesterov");
            }
            Family::Gd | Family::Ista => {}
            _ if self.acceleration != Acceleration::None => return bad("acceleration"),
            _ => {}
        }
        if self.restart != Restart::None
            && !(self.family == Family::Ista && self.acceleration == Acceleration::Fista)
        {
            return bad("restart (needs ista with acceleration=fista)");
        }
        if self.step_rule == StepRule::BbGist
            && !(self.family == Family::Ista && self.acceleration == Acceleration::None)
        {
            return bad("step_rule=bb_gist (needs ista without acceleration)");
        }
        if self.working_set && self.family != Family::Cd {
            return bad("working_set");
        }
        if self.ws_size == 0 {
            return bad("ws_size=0");
        }
        if !(-1.0..=1.0).contains(&self.dual_init) {
            return bad("dual_init outside [-1, 1]");
        }
        Ok(())
    }

    /// Reason why this solver cannot run the objective, if any.
    pub fn incompatibility(&self, objective: &Objective) -> Option<String> {
        if let Err(e) = self.validate() {
            return Some(format!("{e}"));
        }
        if !supports(self.family, objective.kind) {
            return Some(format!("{} does not support objective {}", self.family, objective.kind));
        }
        if objective.fit_intercept && !self.capabilities().supports_intercept {
            return Some(format!("{} cannot fit an unpenalized intercept", self.family));
        }
        if self.step_rule == StepRule::BbGist && objective.kind != ObjectiveKind::Mcp {
            return Some("step_rule=bb_gist is only implemented for mcp".into());
        }
        if self.family == Family::Synthesis && objective.fit != DataFit::L2 {
            return Some("the synthesis formulation exists only for the l2 data fit".into());
        }
        None
    }

    /// `family[k=v,...]` with the variant parameters relevant to the family.
    pub fn label(&self) -> String {
        let params: Vec<String> = self.variant_params().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        if params.is_empty() {
            String::from(self.family.as_str())
        } else {
            format!("{}[{}]", self.family, params.join(","))
        }
    }

    /// Variant parameters that matter for the family, sorted by name.
    pub fn variant_params(&self) -> Vec<(&'static str, String)> {
        let mut out: Vec<(&'static str, String)> = match self.family {
            Family::Gd => alloc::vec![("acceleration", self.acceleration.as_str().into())],
            Family::Ista => alloc::vec![
                ("acceleration", self.acceleration.as_str().into()),
                ("restart", self.restart.as_str().into()),
                ("step_rule", self.step_rule.as_str().into()),
            ],
            Family::Cd => {
                let mut v = alloc::vec![("working_set", format!("{}", self.working_set))];
                if self.working_set {
                    v.push(("ws_size", format!("{}", self.ws_size)));
                }
                v
            }
            Family::SagaSvrg => alloc::vec![("stochastic_variant", self.stochastic_variant.as_str().into())],
            Family::RidgeDirect => alloc::vec![("direct_method", self.direct_method.as_str().into())],
            Family::CondatVu => alloc::vec![("dual_init", format!("{}", self.dual_init))],
            Family::Synthesis => alloc::vec![("inner", self.inner.as_str().into())],
        };
        out.sort();
        out
    }
}

/// Runs a solver from `θ = 0` up to `stop` and returns the final iterate.
pub fn run(
    spec: &SolverSpec,
    objective: &Objective,
    dataset: &Dataset,
    stop: StopValue,
    seed: u64,
) -> Result<Iterate> {
    if let Some(reason) = spec.incompatibility(objective) {
        return Err(Error::Unsupported(reason));
    }
    match (spec.family, stop) {
        (Family::RidgeDirect, StopValue::Once) if spec.direct_method == DirectMethod::Cholesky => {
            direct::run_cholesky(objective, dataset)
        }
        (Family::RidgeDirect, StopValue::Tolerance(tol)) if spec.direct_method == DirectMethod::Cg => {
            direct::run_cg(objective, dataset, tol)
        }
        (Family::RidgeDirect, _) => Err(Error::InvalidArgument(format!(
            "ridge_direct with {} does not accept stop value {stop:?}",
            spec.direct_method
        ))),
        (_, StopValue::Iterations(n)) => {
            let n = n as usize;
            match spec.family {
                Family::Gd => gradient::run_gradient(spec, objective, dataset, n),
                Family::Ista => prox_grad::run_ista(spec, objective, dataset, n),
                Family::Cd => cd::run_cd(spec, objective, dataset, n),
                Family::SagaSvrg => stochastic::run_saga_svrg(spec, objective, dataset, n, seed),
                Family::CondatVu => tv::run_condat_vu(spec, objective, dataset, n),
                Family::Synthesis => tv::run_synthesis(spec, objective, dataset, n),
                Family::RidgeDirect => unreachable!(),
            }
        }
        (_, other) => {
            Err(Error::InvalidArgument(format!("{} expects an iteration count, got {other:?}", spec.family)))
        }
    }
}

/// Smooth loss plus separable penalty over a linear model, the common shape
/// behind the coordinate, proximal-gradient and stochastic solvers.
pub(crate) struct Composite<'a> {
    pub x: &'a Design,
    pub y: &'a [f64],
    pub loss: Loss,
    pub penalty: Penalty,
}

impl<'a> Composite<'a> {
    pub(crate) fn from_objective(objective: &Objective, dataset: &'a Dataset) -> Result<Self> {
        let penalty = objective
            .penalty()
            .ok_or_else(|| Error::Unsupported(format!("{} has no separable penalty", objective.kind)))?;
        Ok(Self { x: &dataset.x, y: &dataset.y, loss: objective.loss(dataset.n_samples()), penalty })
    }
}
