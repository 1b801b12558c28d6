//! Built-in objectives, dataset generators and solver families, and the
//! translation from configuration parameters to their core types.

use std::fmt::Write as _;
use std::path::Path;

use optbench_core::bench::{ParamConfig, ParamValue};
use optbench_core::data::{gen_blocks_tv, gen_classification, gen_regression, standardize, Dataset, BLOCKS_TV_NOISE_STD};
use optbench_core::problems::{describe, DataFit, ObjectiveKind, ObjectiveSpec, Regularization, METRIC_NAMES};
use optbench_core::solvers::{supports, Family, SolverSpec};

use crate::error::{BenchError, Result};
use crate::libsvm::load_libsvm;

/// A configurable parameter with its default, as shown by `list`.
#[derive(Debug, Clone, Copy)]
pub struct ParamDoc {
    pub name: &'static str,
    pub default: &'static str,
}

const fn doc(name: &'static str, default: &'static str) -> ParamDoc {
    ParamDoc { name, default }
}

pub const DATASET_NAMES: [&str; 4] = ["blocks_tv", "classification", "libsvm", "simulated"];

pub fn objective_params(kind: ObjectiveKind) -> Vec<ParamDoc> {
    let mut out = Vec::new();
    if kind.is_sparse_penalty() {
        out.push(doc("reg", "required unless lambda_frac is given"));
        out.push(doc("lambda_frac", "fraction of lambda_max, alternative to reg"));
    } else {
        out.push(doc("reg", "required"));
    }
    match kind {
        ObjectiveKind::Mcp => out.push(doc("gamma", "3")),
        ObjectiveKind::Tv1d => out.extend([doc("fit", "l2"), doc("mu", "1")]),
        ObjectiveKind::LogregL2 => out.push(doc("fit_intercept", "false")),
        _ => {}
    }
    out
}

pub fn dataset_params(name: &str) -> Option<Vec<ParamDoc>> {
    let linear = || {
        vec![
            doc("n", "200"),
            doc("p", "100"),
            doc("rho", "0.6"),
            doc("density", "0.2"),
            doc("snr", "3"),
            doc("seed", "0"),
            doc("standardize", "false"),
        ]
    };
    match name {
        "simulated" | "classification" => Some(linear()),
        "blocks_tv" => Some(vec![
            doc("n", "60"),
            doc("p", "50"),
            doc("k", "5"),
            doc("noise_std", "0.1"),
            doc("seed", "0"),
            doc("standardize", "false"),
        ]),
        "libsvm" => Some(vec![doc("path", "required"), doc("standardize", "false")]),
        _ => None,
    }
}

pub fn solver_params(family: Family) -> Vec<ParamDoc> {
    match family {
        Family::Gd => vec![doc("acceleration", "none (none|nesterov)")],
        Family::Ista => vec![
            doc("acceleration", "none (none|fista)"),
            doc("restart", "none (none|objective_increase)"),
            doc("step_rule", "fixed (fixed|bb_gist)"),
        ],
        Family::Cd => vec![doc("working_set", "false"), doc("ws_size", "100")],
        Family::SagaSvrg => vec![doc("stochastic_variant", "saga (saga|svrg)")],
        Family::RidgeDirect => vec![doc("direct_method", "cholesky (cholesky|cg)")],
        Family::CondatVu => vec![doc("dual_init", "0 (fraction of lambda in [-1, 1])")],
        Family::Synthesis => vec![doc("inner", "cd (cd|fista)")],
    }
}

fn check_known(what: &str, cfg: &ParamConfig, known: &[ParamDoc]) -> Result<()> {
    for key in cfg.keys() {
        if !known.iter().any(|d| d.name == key) {
            let names: Vec<&str> = known.iter().map(|d| d.name).collect();
            return Err(BenchError::Config(format!(
                "unknown parameter '{key}' for {what} (expected one of: {})",
                names.join(", ")
            )));
        }
    }
    Ok(())
}

fn float(cfg: &ParamConfig, key: &str, default: f64) -> Result<f64> {
    match cfg.get(key) {
        None => Ok(default),
        Some(v) => v.as_f64().ok_or_else(|| BenchError::Config(format!("parameter '{key}' must be a number, got {v}"))),
    }
}

fn count(cfg: &ParamConfig, key: &str, default: usize) -> Result<usize> {
    match cfg.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_i64()
            .and_then(|i| usize::try_from(i).ok())
            .ok_or_else(|| BenchError::Config(format!("parameter '{key}' must be a non-negative integer, got {v}"))),
    }
}

fn flag(cfg: &ParamConfig, key: &str, default: bool) -> Result<bool> {
    match cfg.get(key) {
        None => Ok(default),
        Some(v) => v.as_bool().ok_or_else(|| BenchError::Config(format!("parameter '{key}' must be a boolean, got {v}"))),
    }
}

fn text<'a>(cfg: &'a ParamConfig, key: &str) -> Result<Option<&'a str>> {
    match cfg.get(key) {
        None => Ok(None),
        Some(ParamValue::Str(s)) => Ok(Some(s)),
        Some(v) => Err(BenchError::Config(format!("parameter '{key}' must be a string, got {v}"))),
    }
}

fn parsed<T: std::str::FromStr<Err = optbench_core::Error>>(cfg: &ParamConfig, key: &str) -> Result<Option<T>> {
    text(cfg, key)?.map(|s| s.parse::<T>().map_err(BenchError::from)).transpose()
}

pub fn parse_objective_kind(name: &str) -> Result<ObjectiveKind> {
    name.parse::<ObjectiveKind>().map_err(|_| {
        let names: Vec<&str> = ObjectiveKind::ALL.iter().map(|k| k.as_str()).collect();
        BenchError::Config(format!("unknown objective '{name}' (available: {})", names.join(", ")))
    })
}

pub fn parse_family(name: &str) -> Result<Family> {
    name.parse::<Family>().map_err(|_| {
        let names: Vec<&str> = Family::ALL.iter().map(|f| f.as_str()).collect();
        BenchError::Config(format!("unknown solver '{name}' (available: {})", names.join(", ")))
    })
}

pub fn check_dataset_name(name: &str) -> Result<()> {
    if DATASET_NAMES.contains(&name) {
        Ok(())
    } else {
        Err(BenchError::Config(format!("unknown dataset '{name}' (available: {})", DATASET_NAMES.join(", "))))
    }
}

pub fn build_objective(kind: ObjectiveKind, cfg: &ParamConfig) -> Result<ObjectiveSpec> {
    check_known(kind.as_str(), cfg, &objective_params(kind))?;
    let reg = match (cfg.get("reg"), cfg.get("lambda_frac")) {
        (Some(_), Some(_)) => return Err(BenchError::Config("give either reg or lambda_frac, not both".into())),
        (Some(_), None) => Regularization::Value(float(cfg, "reg", 0.0)?),
        (None, Some(_)) => Regularization::FractionOfMax(float(cfg, "lambda_frac", 0.0)?),
        (None, None) => return Err(BenchError::Config(format!("objective {kind} needs reg or lambda_frac"))),
    };
    let mut spec = ObjectiveSpec::new(kind, 0.0);
    spec.reg = reg;
    spec.gamma = float(cfg, "gamma", spec.gamma)?;
    spec.mu = float(cfg, "mu", spec.mu)?;
    if let Some(fit) = parsed::<DataFit>(cfg, "fit")? {
        spec.fit = fit;
    }
    spec.fit_intercept = flag(cfg, "fit_intercept", false)?;
    spec.validate()?;
    Ok(spec)
}

/// Checks parameter names of a dataset entry without generating it.
pub fn check_dataset_params(name: &str, cfg: &ParamConfig) -> Result<()> {
    check_dataset_name(name)?;
    check_known(name, cfg, &dataset_params(name).unwrap_or_default())
}

/// Builds a dataset; relative libsvm paths are resolved against `base_dir`.
pub fn build_dataset(name: &str, cfg: &ParamConfig, base_dir: &Path) -> Result<Dataset> {
    check_dataset_params(name, cfg)?;
    let seed = count(cfg, "seed", 0)? as u64;
    let dataset = match name {
        "simulated" | "classification" => {
            let (n, p) = (count(cfg, "n", 200)?, count(cfg, "p", 100)?);
            let (rho, density, snr) = (float(cfg, "rho", 0.6)?, float(cfg, "density", 0.2)?, float(cfg, "snr", 3.0)?);
            if name == "simulated" {
                gen_regression(n, p, rho, density, snr, seed)?
            } else {
                gen_classification(n, p, rho, density, snr, seed)?
            }
        }
        "blocks_tv" => gen_blocks_tv(
            count(cfg, "n", 60)?,
            count(cfg, "p", 50)?,
            count(cfg, "k", 5)?,
            float(cfg, "noise_std", BLOCKS_TV_NOISE_STD)?,
            seed,
        )?,
        _ => {
            let path = text(cfg, "path")?.ok_or_else(|| BenchError::Config("libsvm dataset needs a path".into()))?;
            load_libsvm(base_dir.join(path))?
        }
    };
    Ok(if flag(cfg, "standardize", false)? { standardize(&dataset) } else { dataset })
}

pub fn build_solver(family: Family, cfg: &ParamConfig) -> Result<SolverSpec> {
    check_known(family.as_str(), cfg, &solver_params(family))?;
    let mut spec = SolverSpec::new(family);
    if let Some(v) = parsed(cfg, "acceleration")? {
        spec.acceleration = v;
    }
    if let Some(v) = parsed(cfg, "restart")? {
        spec.restart = v;
    }
    if let Some(v) = parsed(cfg, "step_rule")? {
        spec.step_rule = v;
    }
    if let Some(v) = parsed(cfg, "stochastic_variant")? {
        spec.stochastic_variant = v;
    }
    if let Some(v) = parsed(cfg, "direct_method")? {
        spec.direct_method = v;
    }
    if let Some(v) = parsed(cfg, "inner")? {
        spec.inner = v;
    }
    spec.working_set = flag(cfg, "working_set", spec.working_set)?;
    spec.ws_size = count(cfg, "ws_size", spec.ws_size)?;
    spec.dual_init = float(cfg, "dual_init", spec.dual_init)?;
    spec.validate()?;
    Ok(spec)
}

fn push_params(out: &mut String, params: &[ParamDoc]) {
    for p in params {
        let _ = writeln!(out, "    {} = {}", p.name, p.default);
    }
}

/// Human-readable listing of everything that can appear in a config.
pub fn listing() -> String {
    let mut out = String::from("objectives:\n");
    let mut kinds = ObjectiveKind::ALL.to_vec();
    kinds.sort_by_key(|k| k.as_str());
    for kind in &kinds {
        let _ = writeln!(out, "  {}: {}", kind, describe(*kind));
        push_params(&mut out, &objective_params(*kind));
    }
    out.push_str("solvers:\n");
    for family in Family::ALL {
        let caps = SolverSpec::new(*family).capabilities();
        let compatible: Vec<&str> = kinds.iter().filter(|k| supports(*family, **k)).map(|k| k.as_str()).collect();
        let _ = writeln!(
            out,
            "  {}: objectives=[{}] smooth_only={} needs_prox={} supports_sparse={} supports_intercept={} strategy={}",
            family,
            compatible.join(","),
            caps.smooth_only,
            caps.needs_prox,
            caps.supports_sparse,
            caps.supports_intercept,
            caps.strategy.as_str(),
        );
        push_params(&mut out, &solver_params(*family));
    }
    out.push_str("datasets:\n");
    for name in DATASET_NAMES {
        let _ = writeln!(out, "  {name}");
        push_params(&mut out, &dataset_params(name).unwrap_or_default());
    }
    out.push_str("metrics:\n");
    for m in METRIC_NAMES {
        let _ = writeln!(out, "  {m}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_mentions_the_registries() {
        let text = listing();
        assert!(text.contains("  lasso:"));
        let cv = text.lines().find(|l| l.starts_with("  condat_vu:")).unwrap();
        assert!(cv.contains("tv1d"));
        assert_eq!(text, listing());
    }

    #[test]
    fn unknown_ids_list_alternatives() {
        let err = parse_family("lars").unwrap_err().to_string();
        assert!(err.contains("lars") && err.contains("ista") && err.contains("cd"), "{err}");
        assert!(parse_objective_kind("svm").is_err());
        assert!(check_dataset_name("mnist").is_err());
    }

    #[test]
    fn parameters_are_checked() {
        let mut cfg = ParamConfig::new();
        cfg.insert("acceleration".into(), "fista".into());
        assert!(build_solver(Family::Ista, &cfg).is_ok());
        assert!(build_solver(Family::Gd, &cfg).is_err());
        cfg.insert("momentum".into(), 0.9.into());
        assert!(build_solver(Family::Ista, &cfg).is_err());

        let mut obj = ParamConfig::new();
        assert!(build_objective(ObjectiveKind::Lasso, &obj).is_err());
        obj.insert("lambda_frac".into(), 0.1.into());
        assert!(build_objective(ObjectiveKind::Lasso, &obj).is_ok());
        assert!(build_objective(ObjectiveKind::Ridge, &obj).is_err());
    }
}
