//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use optbench::benchmark::{execute, plan, BenchmarkOutput, ExecOptions, MetricFactory, Plan};
use optbench::cli::RunFlags;
use optbench::config::parse_config;
use optbench::runner::{MetricEvaluator, ObjectiveMetrics};
use optbench_core::bench::{Component, StopValue, TerminalReason};
use optbench_core::data::{gen_blocks_tv, gen_classification, gen_regression, Dataset};
use optbench_core::problems::prox::{prox_mcp, prox_tv1d, soft_threshold};
use optbench_core::problems::{
    grad_smooth, objective_value, Iterate, MetricSet, Objective, ObjectiveKind, ObjectiveSpec, STATIONARITY,
    SUBOPTIMALITY, SUPPORT_FRACTION,
};
use optbench_core::solvers::{
    condat_vu_with_dual, run, Acceleration, Family, InnerSolver, Restart, SolverSpec, StepRule, StochasticVariant,
};
use optbench_core::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn show(c: &Component) -> String {
    format!("{}({})", c.name, c.canonical_params())
}

fn value(obj: &Objective, d: &Dataset, it: &Iterate) -> f64 {
    objective_value(obj, d, it).unwrap()
}

fn iters(spec: &SolverSpec, obj: &Objective, d: &Dataset, n: u64) -> Iterate {
    run(spec, obj, d, StopValue::Iterations(n), 0).unwrap()
}

/// Every iterative solver variant the library offers.
fn iterative_variants() -> Vec<SolverSpec> {
    let ista = SolverSpec::new(Family::Ista);
    vec![
        SolverSpec::new(Family::Gd),
        SolverSpec::new(Family::Gd).accelerated(Acceleration::Nesterov),
        ista.clone(),
        ista.clone().accelerated(Acceleration::Fista),
        ista.clone().accelerated(Acceleration::Fista).restart(Restart::ObjectiveIncrease),
        ista.step_rule(StepRule::BbGist),
        SolverSpec::new(Family::Cd),
        SolverSpec::new(Family::Cd).working_set(true),
        SolverSpec::new(Family::SagaSvrg),
        SolverSpec::new(Family::SagaSvrg).stochastic(StochasticVariant::Svrg),
        SolverSpec::new(Family::CondatVu),
        SolverSpec::new(Family::Synthesis),
        SolverSpec::new(Family::Synthesis).inner(InnerSolver::Fista),
    ]
}

fn prox_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = [0.0_f64; 3];
    for _ in 0..500 {
        let t = rng.random_range(-10.0..10.0);
        let tau = rng.random_range(0.0..5.0);
        worst[0] = worst[0].max((soft_threshold(t, tau) - oracles::soft_threshold_oracle(t, tau)).abs());

        let lambda = rng.random_range(0.1..2.0);
        let gamma = rng.random_range(1.5..5.0);
        let tau = rng.random_range(0.05..0.95) * gamma;
        let t = rng.random_range(-3.0..3.0) * gamma * lambda;
        let got = prox_mcp(t, tau, lambda, gamma).map_err(|e| e.to_string())?;
        worst[1] = worst[1].max((got - oracles::prox_mcp_oracle(t, tau, lambda, gamma)).abs());

        let p = rng.random_range(1..25);
        let y: Vec<f64> = (0..p).map(|_| rng.random_range(-3.0..3.0)).collect();
        let tau = rng.random_range(0.0..2.0);
        let got = prox_tv1d(&y, tau).map_err(|e| e.to_string())?;
        worst[2] = worst[2].max(linf(&got, &oracles::prox_tv_oracle(&y, tau, 1e-12)));
    }
    ensure(worst.iter().all(|w| *w < 1e-8), || format!("max errors {worst:?}"))?;
    Ok(format!("max abs error soft/mcp/tv = {:.1e}/{:.1e}/{:.1e}", worst[0], worst[1], worst[2]))
}

fn gradient_checks() -> Outcome {
    let specs = [
        ObjectiveSpec::new(ObjectiveKind::Ridge, 0.7),
        ObjectiveSpec::new(ObjectiveKind::Lasso, 0.7),
        ObjectiveSpec::new(ObjectiveKind::LogregL2, 0.7),
        ObjectiveSpec::new(ObjectiveKind::LogregL2, 0.7).intercept(true),
        ObjectiveSpec::new(ObjectiveKind::LogregL1, 0.7),
        ObjectiveSpec::new(ObjectiveKind::Mcp, 0.7).gamma(3.0),
        ObjectiveSpec::new(ObjectiveKind::Tv1d, 0.7),
        ObjectiveSpec::new(ObjectiveKind::Tv1d, 0.7).huber(0.5),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0_f64;
    for spec in &specs {
        for _ in 0..20 {
            let (n, p) = (12, 7);
            let data: Vec<f64> = (0..n * p).map(|_| rng.sample(StandardNormal)).collect();
            let y: Vec<f64> = if spec.kind.is_logistic() {
                (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect()
            } else {
                (0..n).map(|_| rng.sample::<f64, _>(StandardNormal) * 2.0).collect()
            };
            let d = Dataset::new(DenseMatrix::new(n, p, data).unwrap(), y).unwrap();
            let obj = spec.resolve(&d).map_err(|e| e.to_string())?;
            // the penalty of non-smooth kinds is excluded from the gradient
            let smooth = if obj.kind.is_smooth() { obj } else { Objective { lambda: 0.0, ..obj } };
            let theta: Vec<f64> = (0..p).map(|_| rng.random_range(-1.0..1.0)).collect();
            let b = obj.fit_intercept.then(|| rng.random_range(-1.0..1.0));
            let g = grad_smooth(&obj, &d, &Iterate { theta: theta.clone(), intercept: b }).unwrap();
            let mut point = theta;
            point.extend(b);
            let f = |v: &[f64]| value(&smooth, &d, &Iterate { theta: v[..p].to_vec(), intercept: b.map(|_| v[p]) });
            let fd = oracles::finite_diff(f, &point, 1e-6);
            let mut analytic = g.theta;
            analytic.extend(g.intercept);
            let err = oracles::rel_err(&analytic, &fd);
            ensure(err < 1e-5, || format!("{spec:?}: relative error {err:.2e}"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!("{} objective variants x 20 instances, max relative error {worst:.1e}", specs.len()))
}

const CONVEX_REGRESSION: &str = r#"
name = "convex-regression"
[[objective]]
name = "ridge"
params = { reg = 1.0 }
[[objective]]
name = "lasso"
params = { lambda_frac = [0.5, 0.1, 0.01] }
[[dataset]]
name = "simulated"
params = { n = 200, p = 100, rho = 0.6, density = 0.2, snr = 3.0, seed = 0 }
[[solver]]
name = "ridge_direct"
params = { direct_method = ["cholesky", "cg"] }
[[solver]]
name = "gd"
params = { acceleration = ["none", "nesterov"] }
[[solver]]
name = "ista"
params = { acceleration = ["none", "fista"] }
[[solver]]
name = "cd"
params = { working_set = [false, true] }
[[solver]]
name = "saga_svrg"
params = { stochastic_variant = ["saga", "svrg"] }
"#;

const CONVEX_CLASSIFICATION: &str = r#"
name = "convex-classification"
[[objective]]
name = "logreg_l2"
params = { reg = 1.0 }
[[objective]]
name = "logreg_l1"
params = { lambda_frac = 0.1 }
[[dataset]]
name = "classification"
params = { n = 200, p = 100, rho = 0.6, density = 0.2, snr = 3.0, seed = 0 }
[[solver]]
name = "gd"
params = { acceleration = ["none", "nesterov"] }
[[solver]]
name = "ista"
params = { acceleration = ["none", "fista"] }
[[solver]]
name = "cd"
[[solver]]
name = "saga_svrg"
params = { stochastic_variant = ["saga", "svrg"] }
"#;

struct Convex {
    plan: Plan,
    output: BenchmarkOutput,
}

fn run_convex(text: &str) -> Convex {
    let cfg = parse_config(text, Path::new(".")).unwrap();
    let plan = plan(&cfg).unwrap();
    let output = execute(&plan, &ExecOptions { jobs: 4, ..ExecOptions::default() }).unwrap();
    Convex { plan, output }
}

fn final_value(r: &optbench::benchmark::RunResult) -> f64 {
    r.curve.points.last().map_or(f64::NAN, |p| p.objective_value())
}

fn convex_agreement(suites: &[Convex]) -> Outcome {
    let mut worst = 0.0_f64;
    let mut groups = 0;
    for s in suites {
        for (g, group) in s.plan.groups.iter().enumerate() {
            let runs: Vec<_> = s.output.runs.iter().filter(|r| r.group == g).collect();
            for r in &runs {
                ensure(r.curve.terminal_reason == TerminalReason::Converged, || {
                    format!("{} on {} ended with {}", show(&r.descriptor.solver), show(&group.objective_component), r.curve.terminal_reason)
                })?;
            }
            let values: Vec<f64> = runs.iter().map(|r| final_value(r)).collect();
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let gap = rel_gap(hi, lo);
            ensure(gap <= 1e-7, || format!("{}: final objectives spread {gap:.2e}", show(&group.objective_component)))?;
            worst = worst.max(gap);
            groups += 1;
        }
    }
    let runs: usize = suites.iter().map(|s| s.output.runs.len()).sum();
    Ok(format!("{groups} problems, {runs} runs, max pairwise relative gap {worst:.1e}"))
}

fn suboptimality_curves(suites: &[Convex]) -> Outcome {
    let mut checked = 0;
    let mut worst = 0.0_f64;
    for s in suites {
        for r in &s.output.runs {
            if r.curve.terminal_reason != TerminalReason::Converged {
                continue;
            }
            let group = &s.plan.groups[r.group];
            let data = &s.plan.datasets[group.dataset_index].1;
            let f0 = value(&group.objective, data, &Iterate::zeros_for(&group.objective, data.n_features()));
            let subs: Vec<f64> = r.curve.points.iter().map(|p| p.metrics[SUBOPTIMALITY]).collect();
            ensure(subs.iter().all(|v| *v >= 0.0), || format!("{}: negative suboptimality", show(&r.descriptor.solver)))?;
            let last = *subs.last().unwrap();
            ensure(last <= 1e-8 * f0, || {
                format!("{} on {}: final {last:.2e} > 1e-8 f(0) = {:.2e}", show(&r.descriptor.solver), show(&group.objective_component), 1e-8 * f0)
            })?;
            worst = worst.max(last / f0);
            checked += 1;
        }
    }
    Ok(format!("{checked} convergent curves, max final suboptimality / f(0) = {worst:.1e}"))
}

fn support_identification(lasso: &Convex) -> Outcome {
    let (g, group) = lasso
        .plan
        .groups
        .iter()
        .enumerate()
        .find(|(_, gr)| gr.objective.kind == ObjectiveKind::Lasso && gr.objective_component.canonical_params() == "lambda_frac=0.1")
        .ok_or("lasso at 0.1 lambda_max not planned")?;
    let data = &lasso.plan.datasets[group.dataset_index].1;
    let star = lasso.output.optima[g].as_ref().and_then(|o| o.theta_star.clone()).ok_or("no theta_star")?;
    let support = |it: &Iterate| -> Vec<usize> { (0..it.theta.len()).filter(|j| it.theta[*j] != 0.0).collect() };
    let mut fractions = Vec::new();
    for (label, spec) in [
        ("cd", SolverSpec::new(Family::Cd)),
        ("fista", SolverSpec::new(Family::Ista).accelerated(Acceleration::Fista)),
    ] {
        let (i, planned) = lasso
            .plan
            .runs
            .iter()
            .enumerate()
            .find(|(_, r)| r.group == g && r.solver == spec)
            .ok_or_else(|| format!("{label} not planned"))?;
        let last = lasso.output.runs[i].curve.points.last().ok_or("empty curve")?;
        let it = iters(&planned.solver, &group.objective, data, last.stop_value as u64);
        ensure(support(&it) == support(&star), || format!("{label} support differs from theta*"))?;
        fractions.push(last.metrics[SUPPORT_FRACTION]);
    }
    let star_fraction = support(&star).len() as f64 / star.theta.len() as f64;
    ensure(fractions.iter().all(|f| *f == star_fraction), || format!("fractions {fractions:?} vs {star_fraction}"))?;
    Ok(format!("cd, fista and theta* share a support of {} features", support(&star).len()))
}

fn lambda_max_boundary() -> Outcome {
    let reg = gen_regression(200, 100, 0.6, 0.2, 3.0, 0).unwrap();
    let cls = gen_classification(200, 100, 0.6, 0.2, 3.0, 0).unwrap();
    let mut cases = 0;
    for (spec, d) in [
        (ObjectiveSpec::with_lambda_frac(ObjectiveKind::Lasso, 1.0), &reg),
        (ObjectiveSpec::with_lambda_frac(ObjectiveKind::Mcp, 1.0).gamma(3.0), &reg),
        (ObjectiveSpec::with_lambda_frac(ObjectiveKind::LogregL1, 1.0), &cls),
    ] {
        let obj = spec.resolve(d).unwrap();
        for solver in iterative_variants().into_iter().filter(|s| s.incompatibility(&obj).is_none()) {
            for n in [0, 1, 2, 3, 10, 50, 300] {
                let it = iters(&solver, &obj, d, n);
                ensure(it.theta.iter().all(|v| *v == 0.0), || format!("{} on {} after {n}", solver.label(), obj.kind))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (objective, solver, iterations) cases return exact zeros"))
}

fn mcp_stationarity() -> Outcome {
    let d = gen_regression(100, 400, 0.6, 0.2, 3.0, 0).unwrap();
    let obj = ObjectiveSpec::with_lambda_frac(ObjectiveKind::Mcp, 0.5).gamma(3.0).resolve(&d).unwrap();
    let mut parts = Vec::new();
    for (spec, n) in [
        (SolverSpec::new(Family::Cd), 100),
        (SolverSpec::new(Family::Ista), 3000),
        (SolverSpec::new(Family::Ista).step_rule(StepRule::BbGist), 300),
    ] {
        let it = iters(&spec, &obj, &d, n);
        let stat = optbench_core::problems::eval_objective(&obj, &d, &it).unwrap()[STATIONARITY];
        ensure(stat < 1e-8, || format!("{} after {n}: stationarity {stat:.2e}", spec.label()))?;
        parts.push(format!("{} {stat:.1e}", spec.label()));
    }
    Ok(parts.join(", "))
}

fn tv_cross_formulation() -> Outcome {
    let d = gen_blocks_tv(60, 50, 5, 0.1, 0).unwrap();
    let obj = Objective::new(ObjectiveKind::Tv1d, 1.0);
    let cv = iters(&SolverSpec::new(Family::CondatVu), &obj, &d, 100_000);
    let synth = iters(&SolverSpec::new(Family::Synthesis), &obj, &d, 2000);
    let (f_cv, f_synth) = (value(&obj, &d, &cv), value(&obj, &d, &synth));
    let gap = rel_gap(f_cv, f_synth);
    ensure(gap <= 1e-7, || format!("analysis {f_cv} vs synthesis {f_synth}: {gap:.2e}"))?;

    // Huber fit: the smooth part's gradient against finite differences at the
    // final iterate, then the objective along the sampled schedule
    let huber = ObjectiveSpec::new(ObjectiveKind::Tv1d, 1.0).huber(0.1).resolve(&d).unwrap();
    let smooth = Objective { lambda: 0.0, ..huber };
    let hcv = iters(&SolverSpec::new(Family::CondatVu), &huber, &d, 20_000);
    let g = grad_smooth(&huber, &d, &hcv).unwrap();
    let fd = oracles::finite_diff(|v: &[f64]| value(&smooth, &d, &Iterate { theta: v.to_vec(), intercept: None }), &hcv.theta, 1e-6);
    let grad_err = oracles::rel_err(&g.theta, &fd);
    ensure(grad_err < 1e-5, || format!("huber gradient error {grad_err:.2e}"))?;
    let schedule = [500u64, 1000, 2000, 4000, 8000, 16000, 32000];
    let values: Vec<f64> =
        schedule.iter().map(|n| value(&huber, &d, &iters(&SolverSpec::new(Family::CondatVu), &huber, &d, *n))).collect();
    for w in values.windows(2) {
        ensure(w[1] <= w[0] * (1.0 + 1e-12), || format!("huber objective increased: {values:?}"))?;
    }

    let ident = Dataset::new(DenseMatrix::identity(50), d.y[..50].to_vec()).unwrap();
    let (it, _) = condat_vu_with_dual(&SolverSpec::new(Family::CondatVu), &obj, &ident, 20_000).unwrap();
    let exact = prox_tv1d(&ident.y, 1.0).unwrap();
    let err = linf(&it.theta, &exact);
    ensure(err <= 1e-7, || format!("X=I: linf error {err:.2e}"))?;
    Ok(format!("analysis/synthesis gap {gap:.1e}, huber gradient {grad_err:.1e}, X=I linf {err:.1e}"))
}

fn determinism_and_resume() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = common::write_config(dir.path(), "tiny.toml", common::TINY);
    let csv = dir.path().join("tiny.csv");
    common::run(&cfg, &csv, RunFlags::default());
    let golden = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/tiny.csv"))
        .map_err(|e| e.to_string())?;
    ensure(common::without_time(&csv) == golden, || "golden CSV mismatch".into())?;

    let cfg = common::write_config(dir.path(), "ten.toml", common::TEN_RUNS);
    let resumed = dir.path().join("resumed.csv");
    let partial = common::run(&cfg, &resumed, RunFlags { stop_after: Some(3), ..RunFlags::default() });
    let rest = common::run(&cfg, &resumed, RunFlags::default());
    ensure(partial.executed == 3 && rest.executed == 7, || format!("executed {} then {}", partial.executed, rest.executed))?;
    let one = dir.path().join("one.csv");
    let four = dir.path().join("four.csv");
    common::run(&cfg, &one, RunFlags { jobs: Some(1), ..RunFlags::default() });
    common::run(&cfg, &four, RunFlags { jobs: Some(4), ..RunFlags::default() });
    let reference = common::without_time(&one);
    ensure(common::without_time(&resumed) == reference, || "resumed CSV differs".into())?;
    ensure(common::without_time(&four) == reference, || "jobs 4 differs from jobs 1".into())?;
    Ok("golden matches, 3+7 resume and jobs 4 reproduce the sequential CSV".into())
}

struct Delayed<'a>(ObjectiveMetrics<'a>);

impl MetricEvaluator for Delayed<'_> {
    fn evaluate(&self, iterate: &Iterate) -> optbench_core::Result<MetricSet> {
        std::thread::sleep(Duration::from_millis(100));
        self.0.evaluate(iterate)
    }
}

fn offline_metric_timing() -> Outcome {
    let text = r#"
name = "timing"
[run]
max_points = 6
[[objective]]
name = "ridge"
params = { reg = 1.0 }
[[dataset]]
name = "simulated"
params = { n = 20, p = 10 }
[[solver]]
name = "gd"
"#;
    let cfg = parse_config(text, Path::new(".")).unwrap();
    let plan = plan(&cfg).unwrap();
    let plain = execute(&plan, &ExecOptions::default()).unwrap();
    let factory: &MetricFactory = &|objective, dataset| Box::new(Delayed(ObjectiveMetrics { objective, dataset }));
    let start = Instant::now();
    let delayed = execute(&plan, &ExecOptions { metrics_override: Some(factory), ..ExecOptions::default() }).unwrap();
    let wall = start.elapsed().as_secs_f64();
    let (a, b) = (&plain.runs[0].curve.points, &delayed.runs[0].curve.points);
    ensure(a.len() == b.len() && a.len() == 6, || format!("{} vs {} points", a.len(), b.len()))?;
    ensure(wall >= 0.6, || format!("delay not applied: wall time {wall:.3}s"))?;
    let worst = a.iter().zip(b).map(|(p, q)| (p.time_s - q.time_s).abs()).fold(0.0, f64::max);
    ensure(worst <= 5e-3, || format!("time_s moved by {worst:.4}s"))?;
    Ok(format!("{} points, max time_s change {:.2} ms with {:.1} s of metric delay", a.len(), worst * 1e3, wall))
}

fn ar1_moments() -> Outcome {
    let (n, p, rho) = (20_000, 8, 0.6_f64);
    let d = gen_regression(n, p, rho, 0.5, 3.0, 7).unwrap();
    let m = d.x.to_dense();
    let mut worst = 0.0_f64;
    for lag in 0..=3usize {
        let target = rho.powi(lag as i32);
        let se = ((1.0 + target * target) / n as f64).sqrt();
        for a in 0..p - lag {
            let c = (0..n).map(|i| m.get(i, a) * m.get(i, a + lag)).sum::<f64>() / n as f64;
            let z = (c - target).abs() / se;
            ensure(z < 3.0, || format!("lag {lag}, column {a}: {z:.2} standard errors"))?;
            worst = worst.max(z);
        }
    }
    Ok(format!("lags 0..3 within {worst:.2} standard errors"))
}

fn report(id: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("{tag} criterion {id:>2} {title}: {detail} [{secs:.1}s]");
    outcome.is_ok()
}

fn main() {
    let start = Instant::now();
    let suites = catch_unwind(|| vec![run_convex(CONVEX_REGRESSION), run_convex(CONVEX_CLASSIFICATION)])
        .map_err(|_| "convex benchmark panicked".to_string());
    let convex_secs = start.elapsed().as_secs_f64();
    let with_suites = |f: &dyn Fn(&[Convex]) -> Outcome| suites.as_ref().map_err(Clone::clone).and_then(|s| f(s));

    let results = [
        report(1, "prox operators vs oracles", prox_oracles),
        report(2, "gradients vs finite differences", gradient_checks),
        report(3, "convex solver agreement", || {
            ensure(convex_secs < 300.0, || format!("took {convex_secs:.0}s"))?;
            with_suites(&|s| convex_agreement(s).map(|d| format!("{d}, {convex_secs:.1}s total")))
        }),
        report(4, "lambda_max boundary", lambda_max_boundary),
        report(5, "suboptimality curves", || with_suites(&suboptimality_curves)),
        report(6, "MCP stationarity", mcp_stationarity),
        report(7, "TV cross-formulation", tv_cross_formulation),
        report(8, "support identification", || with_suites(&|s| support_identification(&s[0]))),
        report(9, "determinism and resume", determinism_and_resume),
        report(10, "off-line metric timing", offline_metric_timing),
        report(11, "AR(1) generator moments", ar1_moments),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
