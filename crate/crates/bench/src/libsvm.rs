//! The libsvm sparse text format: `<label> <index>:<value> ...` per line,
//! with 1-based, strictly increasing indices.

use std::fmt::Write as _;
use std::path::Path;

use optbench_core::data::Dataset;
use optbench_core::{Design, SparseCsr};

use crate::error::{BenchError, Result};

/// Reads a libsvm file into a CSR dataset.
pub fn load_libsvm(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("libsvm");
    Ok(parse_libsvm(&text)?.with_meta(name, vec![("path".into(), path.display().to_string())]))
}

/// Parses libsvm text. The number of columns is the largest index seen.
pub fn parse_libsvm(text: &str) -> Result<Dataset> {
    let mut indptr = vec![0usize];
    let mut indices = Vec::new();
    let mut values = Vec::new();
    let mut y = Vec::new();
    let mut n_cols = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let err = |message: String| BenchError::Parse { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label = tokens.next().unwrap_or_default();
        y.push(label.parse::<f64>().map_err(|_| err(format!("invalid label '{label}'")))?);
        let mut last = 0usize;
        for token in tokens {
            let (idx, val) = token.split_once(':').ok_or_else(|| err(format!("expected index:value, got '{token}'")))?;
            let idx: usize = idx.parse().map_err(|_| err(format!("invalid feature index '{idx}'")))?;
            if idx < 1 {
                return Err(err("feature indices start at 1".into()));
            }
            if idx <= last {
                return Err(err(format!("feature index {idx} does not increase (previous {last})")));
            }
            let val: f64 = val.parse().map_err(|_| err(format!("invalid feature value '{val}'")))?;
            if !val.is_finite() {
                return Err(err(format!("non-finite feature value '{val}'")));
            }
            last = idx;
            n_cols = n_cols.max(idx);
            if val != 0.0 {
                indices.push(idx - 1);
                values.push(val);
            }
        }
        indptr.push(indices.len());
    }
    if y.is_empty() {
        return Err(BenchError::Parse { line: 0, message: "no samples in libsvm input".into() });
    }
    let x = SparseCsr::new(y.len(), n_cols.max(1), indptr, indices, values)?;
    Ok(Dataset::new(x, y)?)
}

/// Writes a dataset in libsvm format, skipping explicit zeros.
pub fn write_libsvm(dataset: &Dataset) -> String {
    let csr = match &dataset.x {
        Design::Sparse { csr, .. } => csr.clone(),
        Design::Dense(d) => SparseCsr::from_dense(d),
    };
    let mut out = String::new();
    for (i, label) in dataset.y.iter().enumerate() {
        out.push_str(&optbench_core::bench::format_float(*label));
        let (idx, vals) = csr.row(i);
        for (j, v) in idx.iter().zip(vals) {
            let _ = write!(out, " {}:{}", j + 1, optbench_core::bench::format_float(*v));
        }
        out.push('\n');
    }
    out
}
