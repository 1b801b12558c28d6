//! Checkpoint store: one line-delimited JSON record per run key.
//!
//! The first line of `<key>.jsonl` is a header with the schema version, the
//! run descriptor, the terminal reason and the number of points; each
//! further line is one curve point. Floats are stored as decimal strings so
//! that infinities survive and values round-trip exactly.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use optbench_core::bench::{
    format_float, parse_float, Component, Curve, CurvePoint, RunDescriptor, RunKey, TerminalReason, SCHEMA_VERSION,
};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// A completed run as kept in the store.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredRun {
    pub descriptor: RunDescriptor,
    pub curve: Curve,
}

#[derive(Serialize, Deserialize)]
struct ComponentRecord {
    name: String,
    params: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    version: u32,
    key: String,
    benchmark: String,
    objective: ComponentRecord,
    dataset: ComponentRecord,
    solver: ComponentRecord,
    rep: u64,
    terminal_reason: String,
    n_points: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointRecord {
    stop_value: String,
    time_s: String,
    diverged: bool,
    metrics: BTreeMap<String, String>,
}

impl From<&Component> for ComponentRecord {
    fn from(c: &Component) -> Self {
        Self { name: c.name.clone(), params: c.params.clone() }
    }
}

impl From<ComponentRecord> for Component {
    fn from(c: ComponentRecord) -> Self {
        Component { name: c.name, params: c.params }
    }
}

fn encode(run: &StoredRun) -> String {
    let d = &run.descriptor;
    let header = Header {
        version: SCHEMA_VERSION,
        key: run.curve.key.to_hex(),
        benchmark: d.benchmark.clone(),
        objective: (&d.objective).into(),
        dataset: (&d.dataset).into(),
        solver: (&d.solver).into(),
        rep: d.rep,
        terminal_reason: run.curve.terminal_reason.as_str().into(),
        n_points: run.curve.points.len(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for p in &run.curve.points {
        let record = PointRecord {
            stop_value: format_float(p.stop_value),
            time_s: format_float(p.time_s),
            diverged: p.diverged,
            metrics: p.metrics.iter().map(|(k, v)| (k.clone(), format_float(*v))).collect(),
        };
        out.push_str(&serde_json::to_string(&record).expect("point serializes"));
        out.push('\n');
    }
    out
}

fn decode(text: &str) -> std::result::Result<StoredRun, String> {
    let mut lines = text.lines();
    let header: Header = serde_json::from_str(lines.next().ok_or("empty record")?).map_err(|e| e.to_string())?;
    if header.version != SCHEMA_VERSION {
        return Err(format!("schema version {} (expected {SCHEMA_VERSION})", header.version));
    }
    let descriptor = RunDescriptor {
        benchmark: header.benchmark,
        objective: header.objective.into(),
        dataset: header.dataset.into(),
        solver: header.solver.into(),
        rep: header.rep,
    };
    let key = RunKey::from_hex(&header.key).map_err(|e| e.to_string())?;
    if descriptor.key() != key {
        return Err("descriptor does not hash to the recorded key".into());
    }
    let terminal_reason: TerminalReason = header.terminal_reason.parse().map_err(|e| format!("{e}"))?;
    let float = |s: &str| parse_float(s).map_err(|e| e.to_string());
    let mut points = Vec::with_capacity(header.n_points);
    for line in lines {
        let r: PointRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let metrics = r.metrics.iter().map(|(k, v)| Ok((k.clone(), float(v)?))).collect::<std::result::Result<_, String>>()?;
        let mut point = CurvePoint::new(float(&r.stop_value)?, float(&r.time_s)?, metrics);
        point.diverged |= r.diverged;
        points.push(point);
    }
    if points.len() != header.n_points {
        return Err(format!("truncated record: {} of {} points", points.len(), header.n_points));
    }
    Ok(StoredRun { descriptor, curve: Curve { key, points, terminal_reason } })
}

/// Directory of run records.
#[derive(Debug, Clone)]
pub struct Store {
    dir: PathBuf,
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Store {
    /// Opens (creating if needed) a store directory.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).map_err(|e| BenchError::io(&dir, e))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &RunKey) -> PathBuf {
        self.dir.join(format!("{}.jsonl", key.to_hex()))
    }

    /// Writes a record atomically: a temporary file in the same directory is
    /// renamed over the final name.
    pub fn put(&self, run: &StoredRun) -> Result<()> {
        let target = self.path_for(&run.curve.key);
        let n = TEMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = self.dir.join(format!(".{}.{}.{n}.tmp", run.curve.key.to_hex(), std::process::id()));
        let write = || -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(encode(run).as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, &target)
        };
        write().map_err(|e| {
            let _ = fs::remove_file(&tmp);
            BenchError::io(&target, e)
        })
    }

    /// The record for `key`, if present and readable. Corrupt records are
    /// logged and reported as absent so that the run is recomputed.
    pub fn get(&self, key: &RunKey) -> Option<StoredRun> {
        let path = self.path_for(key);
        let text = fs::read_to_string(&path).ok()?;
        match decode(&text) {
            Ok(run) if run.curve.key == *key => Some(run),
            Ok(_) => {
                log::warn!("{}: record belongs to another key; ignoring it", path.display());
                None
            }
            Err(e) => {
                log::warn!("{}: corrupt record ({e}); the run will be recomputed", path.display());
                None
            }
        }
    }
}
