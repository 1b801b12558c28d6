//! Benchmark kernel: parameter grids, stop-value schedules, run keys,
//! curves and optimum estimation.
//!
//! Timing and storage live in the `optbench` crate; everything here is
//! deterministic bookkeeping.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::problems::{Iterate, MetricSet, OBJECTIVE_VALUE, SUBOPTIMALITY};

/// Version of the key derivation and result layouts.
pub const SCHEMA_VERSION: u32 = 1;

/// Floor applied to suboptimality so that it can be drawn on a log axis.
pub const SUBOPTIMALITY_FLOOR: f64 = 1e-300;

/// Relative improvement of the best objective below which a curve is
/// considered converged.
pub const CONVERGENCE_RTOL: f64 = 1e-10;

/// Number of trailing points inspected by the convergence test.
pub const CONVERGENCE_WINDOW: usize = 5;

/// Shortest round-trip decimal for `x`; exponent notation outside
/// `[1e-5, 1e16)`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Inverse of [`format_float`].
pub fn parse_float(s: &str) -> Result<f64> {
    match s {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        "nan" => Ok(f64::NAN),
        _ => s.parse().map_err(|_| Error::Config(format!("invalid number '{s}'"))),
    }
}

/// A scalar grid value.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
}

impl ParamValue {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            ParamValue::Int(i) => Some(i as f64),
            ParamValue::Float(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            ParamValue::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match *self {
            ParamValue::Bool(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match *self {
            ParamValue::Int(i) => Some(i),
            ParamValue::Float(f) if libm::trunc(f) == f && f.abs() < 9.0e15 => Some(f as i64),
            _ => None,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Float(x) => f.write_str(&format_float(*x)),
            ParamValue::Str(s) => f.write_str(s),
            ParamValue::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Float(v)
    }
}

impl From<bool> for ParamValue {
    fn from(v: bool) -> Self {
        ParamValue::Bool(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Str(v.into())
    }
}

/// One point of a grid: parameter name → value.
pub type ParamConfig = BTreeMap<String, ParamValue>;

/// `k1=v1,k2=v2` with sorted keys.
pub fn canonical_params<'a, I, V>(params: I) -> String
where
    I: IntoIterator<Item = (&'a String, V)>,
    V: fmt::Display,
{
    let mut items: Vec<(&String, String)> = params.into_iter().map(|(k, v)| (k, v.to_string())).collect();
    items.sort();
    let parts: Vec<String> = items.into_iter().map(|(k, v)| format!("{k}={v}")).collect();
    parts.join(",")
}

/// Named lists of candidate values, expanded as a Cartesian product.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParameterGrid {
    entries: BTreeMap<String, Vec<ParamValue>>,
}

impl ParameterGrid {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds (or replaces) an entry; the value list must be non-empty.
    pub fn insert(&mut self, name: impl Into<String>, values: Vec<ParamValue>) -> Result<()> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::Config(format!("parameter '{name}' has an empty value list")));
        }
        self.entries.insert(name, values);
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, values: Vec<ParamValue>) -> Result<Self> {
        self.insert(name, values)?;
        Ok(self)
    }

    pub fn entries(&self) -> &BTreeMap<String, Vec<ParamValue>> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of configurations the grid expands to.
    pub fn size(&self) -> usize {
        self.entries.values().map(Vec::len).product()
    }
}

/// Cartesian product of the grid, in lexicographic order over the sorted
/// parameter names (the last name varies fastest).
pub fn expand_grid(grid: &ParameterGrid) -> Result<Vec<ParamConfig>> {
    if let Some((name, _)) = grid.entries.iter().find(|(_, v)| v.is_empty()) {
        return Err(Error::Config(format!("parameter '{name}' has an empty value list")));
    }
    let names: Vec<&String> = grid.entries.keys().collect();
    let lists: Vec<&Vec<ParamValue>> = grid.entries.values().collect();
    let mut counters = vec![0usize; names.len()];
    let mut out = Vec::with_capacity(grid.size());
    loop {
        out.push(
            names
                .iter()
                .zip(&counters)
                .zip(&lists)
                .map(|((n, &c), l)| ((*n).clone(), l[c].clone()))
                .collect(),
        );
        let mut pos = names.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            counters[pos] += 1;
            if counters[pos] < lists[pos].len() {
                break;
            }
            counters[pos] = 0;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrategyKind {
    Iteration,
    Tolerance,
    RunOnce,
}

impl StrategyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyKind::Iteration => "iteration",
            StrategyKind::Tolerance => "tolerance",
            StrategyKind::RunOnce => "run_once",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value passed to a solver to bound its run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopValue {
    Iterations(u64),
    Tolerance(f64),
    Once,
}

impl StopValue {
    /// Numeric form recorded in curves; a single run is recorded as 1.
    pub fn as_f64(self) -> f64 {
        match self {
            StopValue::Iterations(n) => n as f64,
            StopValue::Tolerance(t) => t,
            StopValue::Once => 1.0,
        }
    }
}

/// How stop values are generated for one solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingStrategy {
    pub kind: StrategyKind,
    pub growth: f64,
    pub tol_start: f64,
    pub tol_floor: f64,
}

impl StoppingStrategy {
    pub fn new(kind: StrategyKind) -> Self {
        Self { kind, growth: 1.5, tol_start: 1e-1, tol_floor: 1e-15 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.growth > 1.0 && self.growth.is_finite()) {
            return Err(Error::Config(format!("growth must be > 1, got {}", self.growth)));
        }
        if !(self.tol_start > 0.0 && self.tol_floor > 0.0 && self.tol_floor <= self.tol_start) {
            return Err(Error::Config(format!(
                "need 0 < tol_floor <= tol_start, got {} and {}",
                self.tol_floor, self.tol_start
            )));
        }
        Ok(())
    }

    /// Stop value at schedule index `k`, or `None` once the schedule is
    /// exhausted (after the single run, below the tolerance floor, or past
    /// the `u64` range of iteration counts).
    ///
    /// Iteration counts follow `v₀ = 1`, `v_{k+1} = max(v_k + 1, round(growth·v_k))`
    /// with ties rounded to even, giving 1, 2, 3, 4, 6, 9, 14, … for 1.5.
    pub fn value_at(&self, k: usize) -> Option<StopValue> {
        match self.kind {
            StrategyKind::RunOnce => (k == 0).then_some(StopValue::Once),
            StrategyKind::Iteration => {
                let mut v: u64 = 1;
                for _ in 0..k {
                    let grown = libm::rint(v as f64 * self.growth);
                    // the schedule ends rather than saturating the counter
                    if grown >= u64::MAX as f64 {
                        return None;
                    }
                    v = (grown as u64).max(v + 1);
                }
                Some(StopValue::Iterations(v))
            }
            StrategyKind::Tolerance => {
                let raw = self.tol_start / libm::pow(self.growth, k as f64);
                if raw >= self.tol_floor {
                    return Some(StopValue::Tolerance(raw));
                }
                // the floor itself is emitted once, right after the last value above it
                let prev = self.tol_start / libm::pow(self.growth, k as f64 - 1.0);
                (k > 0 && prev > self.tol_floor).then_some(StopValue::Tolerance(self.tol_floor))
            }
        }
    }

    /// The first `n` values of the schedule (fewer when it is exhausted).
    pub fn schedule(&self, n: usize) -> Vec<StopValue> {
        (0..n).map_while(|k| self.value_at(k)).collect()
    }
}

/// Per-run budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunPolicy {
    pub max_run_time_s: f64,
    pub max_points: usize,
}

impl Default for RunPolicy {
    fn default() -> Self {
        Self { max_run_time_s: 100.0, max_points: 50 }
    }
}

/// One sampled iterate of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub stop_value: f64,
    /// wall time of the solver call alone
    pub time_s: f64,
    pub metrics: MetricSet,
    pub diverged: bool,
}

impl CurvePoint {
    /// Builds a point, flagging non-finite objective values as divergence
    /// and recording them as `+inf`.
    pub fn new(stop_value: f64, time_s: f64, mut metrics: MetricSet) -> Self {
        let value = metrics.get(OBJECTIVE_VALUE).copied().unwrap_or(f64::NAN);
        let diverged = !value.is_finite();
        if diverged {
            metrics.insert(OBJECTIVE_VALUE.into(), f64::INFINITY);
        }
        Self { stop_value, time_s, metrics, diverged }
    }

    pub fn objective_value(&self) -> f64 {
        self.metrics.get(OBJECTIVE_VALUE).copied().unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TerminalReason {
    Converged,
    MaxStopValue,
    Timeout,
    Diverged,
    Error,
}

impl TerminalReason {
    pub const ALL: [TerminalReason; 5] = [
        TerminalReason::Converged,
        TerminalReason::MaxStopValue,
        TerminalReason::Timeout,
        TerminalReason::Diverged,
        TerminalReason::Error,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TerminalReason::Converged => "converged",
            TerminalReason::MaxStopValue => "max_stop_value",
            TerminalReason::Timeout => "timeout",
            TerminalReason::Diverged => "diverged",
            TerminalReason::Error => "error",
        }
    }
}

impl fmt::Display for TerminalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TerminalReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TerminalReason::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown terminal reason '{s}'")))
    }
}

/// What the scheduler decides after looking at the history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScheduleStep {
    Next(StopValue),
    Done(TerminalReason),
}

/// Relative improvement of the best objective over the trailing window.
fn converged(history: &[CurvePoint]) -> bool {
    if history.len() <= CONVERGENCE_WINDOW {
        return false;
    }
    let split = history.len() - CONVERGENCE_WINDOW;
    let best = |pts: &[CurvePoint]| pts.iter().map(CurvePoint::objective_value).fold(f64::INFINITY, f64::min);
    let before = best(&history[..split]);
    let after = before.min(best(&history[split..]));
    let improvement = (before - after) / before.abs().max(f64::MIN_POSITIVE);
    improvement < CONVERGENCE_RTOL
}

/// Next stop value for a curve, or the reason it terminates.
pub fn schedule_next(strategy: &StoppingStrategy, history: &[CurvePoint], policy: &RunPolicy) -> ScheduleStep {
    if history.iter().any(|p| p.diverged || !p.objective_value().is_finite()) {
        return ScheduleStep::Done(TerminalReason::Diverged);
    }
    if strategy.kind == StrategyKind::RunOnce && !history.is_empty() {
        return ScheduleStep::Done(TerminalReason::Converged);
    }
    if converged(history) {
        return ScheduleStep::Done(TerminalReason::Converged);
    }
    let elapsed: f64 = history.iter().map(|p| p.time_s).sum();
    if elapsed > policy.max_run_time_s {
        return ScheduleStep::Done(TerminalReason::Timeout);
    }
    if history.len() >= policy.max_points {
        return ScheduleStep::Done(TerminalReason::MaxStopValue);
    }
    match strategy.value_at(history.len()) {
        Some(v) => ScheduleStep::Next(v),
        None => ScheduleStep::Done(TerminalReason::MaxStopValue),
    }
}

/// Content hash identifying one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RunKey(pub [u8; 32]);

impl RunKey {
    pub fn of(run: &RunDescriptor) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(run.canonical().as_bytes());
        RunKey(hasher.finalize().into())
    }

    pub fn to_hex(&self) -> String {
        use core::fmt::Write;
        let mut s = String::with_capacity(64);
        for b in self.0 {
            let _ = write!(s, "{b:02x}");
        }
        s
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        if bytes.len() != 64 {
            return Err(Error::InvalidArgument(format!("run key must be 64 hex digits, got {}", bytes.len())));
        }
        let mut out = [0u8; 32];
        for (i, pair) in bytes.chunks(2).enumerate() {
            let text = core::str::from_utf8(pair).map_err(|_| Error::InvalidArgument("non-ascii run key".into()))?;
            out[i] = u8::from_str_radix(text, 16)
                .map_err(|_| Error::InvalidArgument(format!("invalid hex digits '{text}' in run key")))?;
        }
        Ok(RunKey(out))
    }
}

impl fmt::Display for RunKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// A named, parameterized component of a run (objective, dataset or solver).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl Component {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), params: BTreeMap::new() }
    }

    pub fn param(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    /// `k1=v1,k2=v2` with sorted keys.
    pub fn canonical_params(&self) -> String {
        canonical_params(self.params.iter())
    }
}

/// Everything that identifies a run.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RunDescriptor {
    pub benchmark: String,
    pub objective: Component,
    pub dataset: Component,
    pub solver: Component,
    pub rep: u64,
}

impl RunDescriptor {
    /// Injective text encoding fed to the hash: every field is
    /// length-prefixed and parameter maps are sorted.
    pub fn canonical(&self) -> String {
        fn push(out: &mut String, s: &str) {
            out.push_str(&format!("{}:{s};", s.len()));
        }
        fn push_component(out: &mut String, tag: &str, c: &Component) {
            push(out, tag);
            push(out, &c.name);
            push(out, &format!("{}", c.params.len()));
            for (k, v) in &c.params {
                push(out, k);
                push(out, v);
            }
        }
        let mut out = String::new();
        push(&mut out, &format!("schema={SCHEMA_VERSION}"));
        push(&mut out, &self.benchmark);
        push_component(&mut out, "objective", &self.objective);
        push_component(&mut out, "dataset", &self.dataset);
        push_component(&mut out, "solver", &self.solver);
        push(&mut out, &format!("rep={}", self.rep));
        out
    }

    pub fn key(&self) -> RunKey {
        RunKey::of(self)
    }
}

/// The sampled history of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub key: RunKey,
    pub points: Vec<CurvePoint>,
    pub terminal_reason: TerminalReason,
}

impl Curve {
    /// Point with the smallest finite objective (first one on ties).
    pub fn best_point(&self) -> Option<(usize, &CurvePoint)> {
        let mut best: Option<(usize, &CurvePoint)> = None;
        for (i, p) in self.points.iter().enumerate() {
            let v = p.objective_value();
            if p.diverged || !v.is_finite() {
                continue;
            }
            if best.is_none_or(|(_, b)| v < b.objective_value()) {
                best = Some((i, p));
            }
        }
        best
    }
}

/// Iterates kept in memory for optimum estimation, by `(run, point index)`.
pub type ThetaArchive = BTreeMap<(RunKey, usize), Iterate>;

/// Best objective value of a group and where it was reached.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimumEstimate {
    pub f_star: f64,
    /// absent when the iterate was not archived (e.g. loaded from a store)
    pub theta_star: Option<Iterate>,
    pub source_key: RunKey,
    pub source_point: usize,
}

/// Minimum objective over every point of every curve of a group; ties go
/// to the first point in curve order.
pub fn estimate_optimum(curves: &[Curve], archive: &ThetaArchive) -> Result<OptimumEstimate> {
    if curves.iter().all(|c| c.points.is_empty()) {
        return Err(Error::InvalidArgument("cannot estimate an optimum from an empty group".into()));
    }
    let mut best: Option<(f64, RunKey, usize)> = None;
    for curve in curves {
        if let Some((i, p)) = curve.best_point() {
            let v = p.objective_value();
            if best.is_none_or(|(b, _, _)| v < b) {
                best = Some((v, curve.key, i));
            }
        }
    }
    let (f_star, source_key, source_point) =
        best.ok_or_else(|| Error::Numerical("every point of the group diverged".into()))?;
    Ok(OptimumEstimate {
        f_star,
        theta_star: archive.get(&(source_key, source_point)).cloned(),
        source_key,
        source_point,
    })
}

/// `objective_value − f_star`, clamped below at [`SUBOPTIMALITY_FLOOR`].
pub fn suboptimality(value: f64, f_star: f64) -> f64 {
    let gap = value - f_star;
    if gap.is_nan() || gap == f64::INFINITY {
        f64::INFINITY
    } else {
        gap.max(SUBOPTIMALITY_FLOOR)
    }
}

/// Adds the `suboptimality` metric to every point.
pub fn annotate_suboptimality(curves: &mut [Curve], optimum: &OptimumEstimate) {
    for point in curves.iter_mut().flat_map(|c| c.points.iter_mut()) {
        let s = suboptimality(point.objective_value(), optimum.f_star);
        point.metrics.insert(SUBOPTIMALITY.into(), s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(v: f64) -> CurvePoint {
        let mut m = MetricSet::new();
        m.insert(OBJECTIVE_VALUE.into(), v);
        CurvePoint::new(1.0, 0.0, m)
    }

    #[test]
    fn iteration_schedule_prefix() {
        let s = StoppingStrategy::new(StrategyKind::Iteration);
        let values: Vec<f64> = s.schedule(9).into_iter().map(StopValue::as_f64).collect();
        assert_eq!(values, [1.0, 2.0, 3.0, 4.0, 6.0, 9.0, 14.0, 21.0, 32.0]);
    }

    #[test]
    fn tolerance_schedule_ends_at_floor() {
        let s = StoppingStrategy::new(StrategyKind::Tolerance);
        let all = s.schedule(1000);
        assert_eq!(*all.last().unwrap(), StopValue::Tolerance(1e-15));
        assert!(all.windows(2).all(|w| w[1].as_f64() < w[0].as_f64()));
    }

    #[test]
    fn run_once_has_one_value() {
        let s = StoppingStrategy::new(StrategyKind::RunOnce);
        assert_eq!(s.schedule(5), vec![StopValue::Once]);
    }

    #[test]
    fn schedule_terminations() {
        let s = StoppingStrategy::new(StrategyKind::Iteration);
        let policy = RunPolicy::default();
        let flat: Vec<CurvePoint> = (0..6).map(|_| point(1.0)).collect();
        assert_eq!(schedule_next(&s, &flat, &policy), ScheduleStep::Done(TerminalReason::Converged));
        assert_eq!(schedule_next(&s, &flat[..5], &policy), ScheduleStep::Next(StopValue::Iterations(9)));
        let diverged = [point(1.0), point(f64::NAN)];
        assert_eq!(schedule_next(&s, &diverged, &policy), ScheduleStep::Done(TerminalReason::Diverged));
        let mut slow = point(1.0);
        slow.time_s = 101.0;
        assert_eq!(schedule_next(&s, &[slow], &policy), ScheduleStep::Done(TerminalReason::Timeout));
        let capped = RunPolicy { max_points: 2, ..policy };
        let falling = [point(2.0), point(1.0)];
        assert_eq!(schedule_next(&s, &falling, &capped), ScheduleStep::Done(TerminalReason::MaxStopValue));
    }

    #[test]
    fn hex_round_trip() {
        let d = RunDescriptor {
            benchmark: "b".into(),
            objective: Component::new("lasso").param("lambda", 0.5),
            dataset: Component::new("sim"),
            solver: Component::new("cd"),
            rep: 0,
        };
        let k = d.key();
        assert_eq!(RunKey::from_hex(&k.to_hex()).unwrap(), k);
        assert!(RunKey::from_hex("zz").is_err());
    }

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.1), "0.1");
        assert_eq!(format_float(1e-7), "1e-7");
        assert_eq!(format_float(2.0), "2");
        assert_eq!(format_float(1e300), "1e300");
        assert_eq!(format_float(f64::INFINITY), "inf");
        for x in [0.1, 1e-7, 123.456, 1e-300, -3.5e20, 0.0] {
            assert_eq!(parse_float(&format_float(x)).unwrap(), x);
        }
    }

    #[test]
    fn suboptimality_rules() {
        assert_eq!(suboptimality(1.0, 1.0), SUBOPTIMALITY_FLOOR);
        assert_eq!(suboptimality(2.0, 1.0), 1.0);
        assert_eq!(suboptimality(f64::INFINITY, 1.0), f64::INFINITY);
    }
}
