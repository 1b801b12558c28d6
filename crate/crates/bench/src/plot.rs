//! Static SVG convergence plots, one file per (objective, dataset) group.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{BenchError, Result};
use crate::results::ResultTable;

/// Quantity on the horizontal axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum XAxis {
    #[default]
    Time,
    StopValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotOptions {
    pub metric: String,
    pub x: XAxis,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self { metric: "suboptimality".into(), x: XAxis::Time }
    }
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 230.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 10] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

/// A named polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn span(lo: f64, hi: f64, pad: f64) -> (f64, f64) {
    if hi > lo { (lo, hi) } else { (lo - pad, hi + pad) }
}

/// Round tick positions covering `[lo, hi]`.
fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Renders one plot. The y axis is logarithmic when every value is
/// positive and linear otherwise.
pub fn render_svg(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let all: Vec<(f64, f64)> = series.iter().flat_map(|s| s.points.iter().copied()).collect();
    let log_y = all.iter().all(|(_, y)| *y > 0.0);
    let ty = |y: f64| if log_y { y.log10() } else { y };
    let fold = |f: fn(f64, f64) -> f64, init: f64, sel: &dyn Fn(&(f64, f64)) -> f64| all.iter().map(sel).fold(init, f);
    let (x_lo, x_hi) = span(fold(f64::min, f64::INFINITY, &|p| p.0), fold(f64::max, f64::NEG_INFINITY, &|p| p.0), 1.0);
    let (y_lo, y_hi) = span(
        fold(f64::min, f64::INFINITY, &|p| ty(p.1)),
        fold(f64::max, f64::NEG_INFINITY, &|p| ty(p.1)),
        1.0,
    );
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * pw;
    let sy = |y: f64| TOP + ph - (ty(y) - y_lo) / (y_hi - y_lo) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#, LEFT + pw / 2.0, escape(title));
    let _ = writeln!(svg, r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##);

    for t in linear_ticks(x_lo, x_hi) {
        let x = sx(t);
        let _ = writeln!(svg, r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/>"##, TOP + ph, TOP + ph + 5.0);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, tick_label(t));
    }
    let y_ticks: Vec<(f64, String)> = if log_y {
        let (a, b) = (y_lo.ceil() as i64, y_hi.floor() as i64);
        if a > b {
            // the data lies within one decade: label the ends of the range
            [y_lo, y_hi].iter().map(|e| 10f64.powf(*e)).map(|t| (t, tick_label(t))).collect()
        } else {
            let stride = ((b - a) / 8).max(1);
            (a..=b).filter(|k| (k - a) % stride == 0).map(|k| (10f64.powi(k as i32), format!("1e{k}"))).collect()
        }
    } else {
        linear_ticks(y_lo, y_hi).into_iter().map(|t| (t, tick_label(t))).collect()
    };
    for (t, label) in y_ticks {
        let y = sy(t);
        let _ = writeln!(svg, r##"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="#333"/>"##, LEFT - 5.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 8.0, y + 4.0);
    }
    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 12.0, escape(x_label));
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    );

    let mut labels: Vec<&str> = series.iter().map(|s| s.label.as_str()).collect();
    labels.sort();
    labels.dedup();
    for s in series {
        let color = PALETTE[labels.binary_search(&s.label.as_str()).unwrap_or(0) % PALETTE.len()];
        let coords: Vec<String> = s.points.iter().map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
        let _ = writeln!(svg, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, coords.join(" "));
    }
    for (i, label) in labels.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = TOP + 10.0 + 18.0 * i as f64;
        let x = LEFT + pw + 12.0;
        let _ = writeln!(svg, r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#, x + 20.0);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#, x + 26.0, y + 4.0, escape(label));
    }
    svg.push_str("</svg>\n");
    svg
}

fn file_stem(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

/// Writes one SVG per group that carries the metric. Groups without the
/// metric (it is not defined for every objective) are skipped with a warning;
/// it is an error when no group can be drawn.
pub fn render_plots(table: &ResultTable, out_dir: &Path, options: &PlotOptions) -> Result<Vec<PathBuf>> {
    if !table.metric_names.iter().any(|m| *m == options.metric) {
        return Err(BenchError::Plot(format!(
            "unknown metric '{}' (available: {})",
            options.metric,
            table.metric_names.join(", ")
        )));
    }
    let mut groups: BTreeMap<_, BTreeMap<String, Vec<(f64, f64)>>> = BTreeMap::new();
    for row in &table.rows {
        let entry = groups.entry(row.group()).or_default();
        let label = if row.idx_rep == 0 { row.solver_label() } else { format!("{} rep {}", row.solver_label(), row.idx_rep) };
        let x = match options.x {
            XAxis::Time => row.time_s,
            XAxis::StopValue => row.stop_value,
        };
        if let (Some(x), Some(y)) = (x, row.metrics.get(&options.metric)) {
            if x.is_finite() && y.is_finite() {
                entry.entry(label).or_default().push((x, *y));
                continue;
            }
        }
        entry.entry(label).or_default();
    }
    std::fs::create_dir_all(out_dir).map_err(|e| BenchError::io(out_dir, e))?;
    let x_label = match options.x {
        XAxis::Time => "time (s)",
        XAxis::StopValue => "stop value",
    };
    let mut written = Vec::new();
    for (index, ((obj, obj_params, data, data_params), by_label)) in groups.into_iter().enumerate() {
        let series: Vec<Series> = by_label
            .into_iter()
            .filter(|(_, pts)| !pts.is_empty())
            .map(|(label, points)| Series { label, points })
            .collect();
        if series.is_empty() {
            log::warn!("no '{}' values for {obj}[{obj_params}] on {data}[{data_params}]; no plot", options.metric);
            continue;
        }
        let title = format!("{obj}[{obj_params}] on {data}[{data_params}]");
        let path = out_dir.join(format!("{index:02}_{}_{}.svg", file_stem(&obj), file_stem(&data)));
        let svg = render_svg(&title, x_label, &options.metric, &series);
        std::fs::write(&path, svg).map_err(|e| BenchError::io(&path, e))?;
        written.push(path);
    }
    if written.is_empty() {
        return Err(BenchError::Plot(format!("no group has values for metric '{}'", options.metric)));
    }
    Ok(written)
}
