//! Execution of a single run: the stopping schedule, solver timing and
//! metric evaluation.

use std::time::Instant;

use optbench_core::bench::{
    schedule_next, Curve, CurvePoint, RunKey, RunPolicy, ScheduleStep, StopValue, StoppingStrategy, TerminalReason,
};
use optbench_core::data::Dataset;
use optbench_core::problems::{eval_objective, Iterate, MetricSet, Objective};
use optbench_core::solvers::{self, SolverSpec};

/// A solver bound to its problem: runs from scratch up to a stop value.
pub trait SolverRun: Sync {
    fn run(&self, stop: StopValue) -> optbench_core::Result<Iterate>;
}

/// Computes the metrics of an iterate. Never timed.
pub trait MetricEvaluator: Sync {
    fn evaluate(&self, iterate: &Iterate) -> optbench_core::Result<MetricSet>;
}

/// A built-in solver family on a concrete objective and dataset.
pub struct BuiltinSolver<'a> {
    pub spec: SolverSpec,
    pub objective: Objective,
    pub dataset: &'a Dataset,
    pub seed: u64,
}

impl SolverRun for BuiltinSolver<'_> {
    fn run(&self, stop: StopValue) -> optbench_core::Result<Iterate> {
        solvers::run(&self.spec, &self.objective, self.dataset, stop, self.seed)
    }
}

/// The objective's own metric set.
pub struct ObjectiveMetrics<'a> {
    pub objective: Objective,
    pub dataset: &'a Dataset,
}

impl MetricEvaluator for ObjectiveMetrics<'_> {
    fn evaluate(&self, iterate: &Iterate) -> optbench_core::Result<MetricSet> {
        eval_objective(&self.objective, self.dataset, iterate)
    }
}

/// A finished run with the iterate of every point, kept for optimum
/// estimation.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub curve: Curve,
    pub iterates: Vec<Iterate>,
}

/// Runs the schedule to termination. Each point restarts the solver from
/// zero; only the solver call is timed. Metrics are evaluated after the
/// clock is stopped, and the schedule uses them to detect convergence.
///
/// Recorded times are made non-decreasing along the curve (a larger budget
/// is never reported as faster than a smaller one). Any solver or metric
/// error yields an empty curve with reason `error`.
pub fn execute_run(
    key: RunKey,
    solver: &dyn SolverRun,
    metrics: &dyn MetricEvaluator,
    strategy: &StoppingStrategy,
    policy: &RunPolicy,
) -> RunOutcome {
    let mut points: Vec<CurvePoint> = Vec::new();
    let mut iterates = Vec::new();
    let reason = loop {
        let stop = match schedule_next(strategy, &points, policy) {
            ScheduleStep::Next(stop) => stop,
            ScheduleStep::Done(reason) => break reason,
        };
        let start = Instant::now();
        let result = solver.run(stop);
        let elapsed = start.elapsed().as_secs_f64();
        let iterate = match result {
            Ok(it) => it,
            Err(e) => {
                log::error!("run {key}: solver failed at stop value {stop:?}: {e}");
                break TerminalReason::Error;
            }
        };
        let values = match metrics.evaluate(&iterate) {
            Ok(m) => m,
            Err(e) => {
                log::error!("run {key}: metric evaluation failed: {e}");
                break TerminalReason::Error;
            }
        };
        let time_s = points.last().map_or(elapsed, |p| p.time_s.max(elapsed));
        points.push(CurvePoint::new(stop.as_f64(), time_s, values));
        iterates.push(iterate);
    };
    if reason == TerminalReason::Error {
        points.clear();
        iterates.clear();
    }
    RunOutcome { curve: Curve { key, points, terminal_reason: reason }, iterates }
}

#[cfg(test)]
mod tests {
    use super::*;
    use optbench_core::bench::StrategyKind;
    use optbench_core::problems::OBJECTIVE_VALUE;

    struct Countdown;

    impl SolverRun for Countdown {
        fn run(&self, stop: StopValue) -> optbench_core::Result<Iterate> {
            Ok(Iterate { theta: vec![1.0 / stop.as_f64()], intercept: None })
        }
    }

    struct Value;

    impl MetricEvaluator for Value {
        fn evaluate(&self, iterate: &Iterate) -> optbench_core::Result<MetricSet> {
            Ok([(OBJECTIVE_VALUE.to_string(), iterate.theta[0])].into_iter().collect())
        }
    }

    struct Failing;

    impl SolverRun for Failing {
        fn run(&self, _: StopValue) -> optbench_core::Result<Iterate> {
            Err(optbench_core::Error::Numerical("boom".into()))
        }
    }

    #[test]
    fn schedule_runs_until_the_point_cap() {
        let policy = RunPolicy { max_points: 4, ..RunPolicy::default() };
        let out = execute_run(RunKey([0; 32]), &Countdown, &Value, &StoppingStrategy::new(StrategyKind::Iteration), &policy);
        let stops: Vec<f64> = out.curve.points.iter().map(|p| p.stop_value).collect();
        assert_eq!(stops, [1.0, 2.0, 3.0, 4.0]);
        assert_eq!(out.curve.terminal_reason, TerminalReason::MaxStopValue);
        assert_eq!(out.iterates.len(), 4);
        assert!(out.curve.points.windows(2).all(|w| w[1].time_s >= w[0].time_s));
    }

    #[test]
    fn solver_errors_give_an_empty_error_curve() {
        let out = execute_run(RunKey([1; 32]), &Failing, &Value, &StoppingStrategy::new(StrategyKind::Iteration), &RunPolicy::default());
        assert_eq!(out.curve.terminal_reason, TerminalReason::Error);
        assert!(out.curve.points.is_empty());
    }
}
