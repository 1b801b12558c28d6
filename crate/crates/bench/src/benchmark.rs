//! Planning and execution of a whole benchmark: every compatible
//! (objective, dataset, solver, repetition) combination, resumed from the
//! checkpoint store, followed by optimum estimation per problem group.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use optbench_core::bench::{
    annotate_suboptimality, estimate_optimum, expand_grid, Component, Curve, OptimumEstimate, ParamConfig,
    RunDescriptor, RunPolicy, StoppingStrategy, TerminalReason, ThetaArchive,
};
use optbench_core::data::Dataset;
use optbench_core::problems::Objective;
use optbench_core::solvers::{Family, SolverSpec};

use crate::config::BenchConfig;
use crate::error::Result;
use crate::registry;
use crate::runner::{execute_run, BuiltinSolver, MetricEvaluator, ObjectiveMetrics, RunOutcome, SolverRun};
use crate::store::{Store, StoredRun};

fn component(name: &str, cfg: &ParamConfig) -> Component {
    cfg.iter().fold(Component::new(name), |c, (k, v)| c.param(k.clone(), v))
}

/// One (objective variant, dataset variant) pair; runs in a group share
/// their optimum estimate.
#[derive(Debug, Clone)]
pub struct Group {
    pub objective_component: Component,
    pub dataset_index: usize,
    pub objective: Objective,
}

/// A run to execute.
#[derive(Debug, Clone)]
pub struct PlannedRun {
    pub descriptor: RunDescriptor,
    pub group: usize,
    pub solver: SolverSpec,
    pub strategy: StoppingStrategy,
    pub seed: u64,
}

/// Everything a benchmark will execute, in a fixed order.
#[derive(Debug)]
pub struct Plan {
    pub benchmark: String,
    pub datasets: Vec<(Component, Dataset)>,
    pub groups: Vec<Group>,
    pub runs: Vec<PlannedRun>,
    /// reasons for skipped (objective, solver) pairings
    pub skipped: Vec<String>,
    pub policy: RunPolicy,
}

/// Expands the configuration, generates or loads the datasets and filters
/// incompatible pairings (each one is logged).
pub fn plan(config: &BenchConfig) -> Result<Plan> {
    let mut datasets = Vec::new();
    for entry in &config.datasets {
        for cfg in expand_grid(&entry.grid)? {
            let data = registry::build_dataset(&entry.id, &cfg, &config.base_dir)?;
            datasets.push((component(&entry.id, &cfg), data));
        }
    }
    let mut solvers = Vec::new();
    for entry in &config.solvers {
        for cfg in expand_grid(&entry.grid)? {
            solvers.push(registry::build_solver(entry.id, &cfg)?);
        }
    }
    let mut groups = Vec::new();
    let mut runs = Vec::new();
    let mut skipped = Vec::new();
    for entry in &config.objectives {
        for cfg in expand_grid(&entry.grid)? {
            let spec = registry::build_objective(entry.id, &cfg)?;
            let objective_component = component(entry.id.as_str(), &cfg);
            for (dataset_index, (dataset_component, data)) in datasets.iter().enumerate() {
                let objective = spec.resolve(data)?;
                let group = groups.len();
                for solver in &solvers {
                    if let Some(reason) = solver.incompatibility(&objective) {
                        let msg = format!("skipping {} on {}: {reason}", solver.label(), objective_component.name);
                        log::warn!("{msg}");
                        skipped.push(msg);
                        continue;
                    }
                    let mut solver_component = Component::new(solver.family.as_str());
                    for (k, v) in solver.variant_params() {
                        solver_component = solver_component.param(k, v);
                    }
                    for rep in 0..config.reps {
                        let seed = config.seed + rep;
                        // only the stochastic family consumes the seed, so only it is keyed on it
                        let solver_component = if solver.family == Family::SagaSvrg {
                            solver_component.clone().param("seed", seed)
                        } else {
                            solver_component.clone()
                        };
                        let descriptor = RunDescriptor {
                            benchmark: config.name.clone(),
                            objective: objective_component.clone(),
                            dataset: dataset_component.clone(),
                            solver: solver_component,
                            rep,
                        };
                        runs.push(PlannedRun {
                            descriptor,
                            group,
                            solver: solver.clone(),
                            strategy: config.schedule.strategy(solver.capabilities().strategy),
                            seed,
                        });
                    }
                }
                groups.push(Group { objective_component: objective_component.clone(), dataset_index, objective });
            }
        }
    }
    Ok(Plan { benchmark: config.name.clone(), datasets, groups, runs, skipped, policy: config.policy })
}

/// Builds the metric evaluator of a run in place of the built-in one.
pub type MetricFactory<'a> = dyn for<'d> Fn(Objective, &'d Dataset) -> Box<dyn MetricEvaluator + 'd> + Sync + 'a;

/// Execution settings.
#[derive(Default)]
pub struct ExecOptions<'a> {
    /// worker threads; 0 and 1 both mean sequential
    pub jobs: usize,
    pub store: Option<&'a Store>,
    /// stop after this many solver runs, leaving the rest for a later resume
    pub max_executions: Option<usize>,
    /// replaces the built-in metrics (used to inject instrumented evaluators)
    pub metrics_override: Option<&'a MetricFactory<'a>>,
}

/// A run of the plan with its annotated curve.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub descriptor: RunDescriptor,
    pub group: usize,
    pub curve: Curve,
    pub from_store: bool,
}

/// Result of [`execute`].
#[derive(Debug)]
pub struct BenchmarkOutput {
    pub runs: Vec<RunResult>,
    /// per group, `None` when no run produced a finite objective
    pub optima: Vec<Option<OptimumEstimate>>,
    pub executed: usize,
    pub reused: usize,
    /// `max_executions` was reached before the plan completed
    pub interrupted: bool,
}

impl BenchmarkOutput {
    pub fn errored(&self) -> usize {
        self.runs.iter().filter(|r| r.curve.terminal_reason == TerminalReason::Error).count()
    }
}

fn run_one(plan: &Plan, run: &PlannedRun, options: &ExecOptions<'_>) -> RunOutcome {
    let group = &plan.groups[run.group];
    let dataset = &plan.datasets[group.dataset_index].1;
    let solver = BuiltinSolver { spec: run.solver.clone(), objective: group.objective, dataset, seed: run.seed };
    let key = run.descriptor.key();
    match options.metrics_override {
        Some(make) => {
            let metrics = make(group.objective, dataset);
            execute_run(key, &solver as &dyn SolverRun, metrics.as_ref(), &run.strategy, &plan.policy)
        }
        None => {
            let metrics = ObjectiveMetrics { objective: group.objective, dataset };
            execute_run(key, &solver, &metrics, &run.strategy, &plan.policy)
        }
    }
}

/// Executes the plan (reusing stored runs), estimates the optimum of each
/// group and annotates suboptimality. Output order follows the plan and is
/// independent of `jobs`.
pub fn execute(plan: &Plan, options: &ExecOptions<'_>) -> Result<BenchmarkOutput> {
    let mut slots: Vec<Option<(Curve, Vec<optbench_core::Iterate>, bool)>> = vec![None; plan.runs.len()];
    let mut pending = Vec::new();
    for (i, run) in plan.runs.iter().enumerate() {
        let key = run.descriptor.key();
        match options.store.and_then(|s| s.get(&key)) {
            Some(stored) => slots[i] = Some((stored.curve, Vec::new(), true)),
            None => pending.push(i),
        }
    }
    let reused = plan.runs.len() - pending.len();
    let limit = options.max_executions.unwrap_or(usize::MAX);
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    let first_error = Mutex::new(None);
    let worker = || loop {
        let slot = next.fetch_add(1, Ordering::SeqCst);
        if slot >= pending.len() || slot >= limit {
            break;
        }
        let index = pending[slot];
        let run = &plan.runs[index];
        log::info!("running {} {} on {} [rep {}]", run.solver.label(), run.descriptor.objective.name, run.descriptor.dataset.name, run.descriptor.rep);
        let outcome = run_one(plan, run, options);
        if let Some(store) = options.store {
            let record = StoredRun { descriptor: run.descriptor.clone(), curve: outcome.curve.clone() };
            if let Err(e) = store.put(&record) {
                first_error.lock().unwrap().get_or_insert(e);
            }
        }
        results.lock().unwrap().push((index, outcome));
    };
    let jobs = options.jobs.max(1);
    if jobs == 1 {
        worker();
    } else {
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(worker);
            }
        });
    }
    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e);
    }
    let finished = results.into_inner().unwrap();
    let executed = finished.len();
    for (index, outcome) in finished {
        slots[index] = Some((outcome.curve, outcome.iterates, false));
    }
    let interrupted = slots.iter().any(Option::is_none);

    let mut archive = ThetaArchive::new();
    let mut runs = Vec::new();
    for (run, slot) in plan.runs.iter().zip(slots) {
        let Some((curve, iterates, from_store)) = slot else { continue };
        for (i, it) in iterates.into_iter().enumerate() {
            archive.insert((curve.key, i), it);
        }
        runs.push(RunResult { descriptor: run.descriptor.clone(), group: run.group, curve, from_store });
    }
    let mut by_group: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, r) in runs.iter().enumerate() {
        by_group.entry(r.group).or_default().push(i);
    }
    let mut optima = vec![None; plan.groups.len()];
    for (group, members) in by_group {
        let mut curves: Vec<Curve> = members.iter().map(|&i| runs[i].curve.clone()).collect();
        match estimate_optimum(&curves, &archive) {
            Ok(opt) => {
                annotate_suboptimality(&mut curves, &opt);
                for (&i, c) in members.iter().zip(curves) {
                    runs[i].curve = c;
                }
                optima[group] = Some(opt);
            }
            Err(e) => log::warn!("group {}: no optimum estimate ({e})", plan.groups[group].objective_component.name),
        }
    }
    Ok(BenchmarkOutput { runs, optima, executed, reused, interrupted })
}
