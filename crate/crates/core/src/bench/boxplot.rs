//! Tukey boxplots of a CSV metric, one box per predictor, as standalone SVG.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    CompressionRatio,
    TimeSeconds,
}

impl Metric {
    pub fn column(self) -> &'static str {
        match self {
            Metric::CompressionRatio => "compression_ratio",
            Metric::TimeSeconds => "time_seconds",
        }
    }
}

impl FromStr for Metric {
    type Err = PlotError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "compression_ratio" => Ok(Metric::CompressionRatio),
            "time_seconds" => Ok(Metric::TimeSeconds),
            other => Err(PlotError::UnknownMetric(other.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("unknown metric `{0}` (expected compression_ratio or time_seconds)")]
    UnknownMetric(String),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("CSV has no `{0}` column")]
    MissingColumn(String),
    #[error("row {row}: `{value}` is not a number")]
    BadValue { row: usize, value: String },
    #[error("no values to plot")]
    EmptyGroup,
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Five-number summary with 1.5 IQR whiskers.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxStats {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    /// Smallest value at or above `q1 - 1.5 IQR`.
    pub whisker_low: f64,
    /// Largest value at or below `q3 + 1.5 IQR`.
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

impl BoxStats {
    /// Quartiles use linear interpolation between closest ranks.
    pub fn from_values(values: &[f64]) -> Result<Self, PlotError> {
        if values.is_empty() {
            return Err(PlotError::EmptyGroup);
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let quantile = |q: f64| {
            let pos = q * (v.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
        };
        let (q1, median, q3) = (quantile(0.25), quantile(0.5), quantile(0.75));
        let iqr = q3 - q1;
        let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
        let inside = || v.iter().copied().filter(|&x| x >= lo_fence && x <= hi_fence);
        Ok(BoxStats {
            q1,
            median,
            q3,
            whisker_low: inside().fold(f64::INFINITY, f64::min),
            whisker_high: inside().fold(f64::NEG_INFINITY, f64::max),
            outliers: v
                .iter()
                .copied()
                .filter(|&x| x < lo_fence || x > hi_fence)
                .collect(),
        })
    }
}

/// Values of `column` grouped by the `predictor` column, groups in
/// lexicographic order.
fn read_groups(csv_path: &Path, column: &str) -> Result<BTreeMap<String, Vec<f64>>, PlotError> {
    let mut rdr = csv::Reader::from_path(csv_path)?;
    let headers = rdr.headers()?.clone();
    let index = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| PlotError::MissingColumn(name.to_string()))
    };
    let value_col = index(column)?;
    let group_col = index("predictor")?;
    let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let raw = row.get(value_col).unwrap_or("");
        let value = raw.parse::<f64>().map_err(|_| PlotError::BadValue {
            row: i + 1,
            value: raw.to_string(),
        })?;
        let group = row.get(group_col).unwrap_or("").to_string();
        groups.entry(group).or_default().push(value);
    }
    Ok(groups)
}

const PLOT_HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;
const SLOT_WIDTH: f64 = 120.0;
const BOX_WIDTH: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// SVG document with one box per `(label, stats)` pair, in the given order.
pub fn render_boxplot_svg(metric_name: &str, groups: &[(String, BoxStats)]) -> String {
    let lo = groups
        .iter()
        .flat_map(|(_, s)| s.outliers.iter().copied().chain([s.whisker_low]))
        .fold(f64::INFINITY, f64::min);
    let hi = groups
        .iter()
        .flat_map(|(_, s)| s.outliers.iter().copied().chain([s.whisker_high]))
        .fold(f64::NEG_INFINITY, f64::max);
    let pad = if hi > lo { (hi - lo) * 0.05 } else { lo.abs().max(1.0) * 0.05 };
    let (y_min, y_max) = (lo - pad, hi + pad);
    let y = |v: f64| MARGIN_TOP + (y_max - v) / (y_max - y_min) * PLOT_HEIGHT;

    let width = MARGIN_LEFT + SLOT_WIDTH * groups.len() as f64 + 30.0;
    let height = MARGIN_TOP + PLOT_HEIGHT + MARGIN_BOTTOM;
    let axis_y = MARGIN_TOP + PLOT_HEIGHT;
    let metric = escape(metric_name);

    let mut svg = String::new();
    // Writing to a String cannot fail.
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{:.1}" y="25" text-anchor="middle" font-size="16">{metric} by predictor</text>
<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{axis_y}" stroke="black"/>
<line x1="{MARGIN_LEFT}" y1="{axis_y}" x2="{:.1}" y2="{axis_y}" stroke="black"/>
<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{metric}</text>
<text x="{:.1}" y="{:.1}" text-anchor="middle">predictor</text>"#,
        width / 2.0,
        width - 20.0,
        MARGIN_TOP + PLOT_HEIGHT / 2.0,
        MARGIN_TOP + PLOT_HEIGHT / 2.0,
        MARGIN_LEFT + SLOT_WIDTH * groups.len() as f64 / 2.0,
        height - 15.0,
    );

    for i in 0..=5 {
        let v = y_min + (y_max - y_min) * i as f64 / 5.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{py:.1}" x2="{MARGIN_LEFT}" y2="{py:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT - 8.0,
            y(v) + 4.0,
            format_tick(v),
            py = y(v),
        );
    }

    for (i, (label, s)) in groups.iter().enumerate() {
        let cx = MARGIN_LEFT + SLOT_WIDTH * (i as f64 + 0.5);
        let left = cx - BOX_WIDTH / 2.0;
        let _ = writeln!(
            svg,
            r##"<g class="box" data-group="{label}" data-median="{median}">
<line x1="{cx:.1}" y1="{wh:.1}" x2="{cx:.1}" y2="{q3:.1}" stroke="black"/>
<line x1="{cx:.1}" y1="{q1:.1}" x2="{cx:.1}" y2="{wl:.1}" stroke="black"/>
<line x1="{:.1}" y1="{wh:.1}" x2="{:.1}" y2="{wh:.1}" stroke="black"/>
<line x1="{:.1}" y1="{wl:.1}" x2="{:.1}" y2="{wl:.1}" stroke="black"/>
<rect x="{left:.1}" y="{q3:.1}" width="{BOX_WIDTH}" height="{:.1}" fill="#9ecae1" stroke="black"/>
<line x1="{left:.1}" y1="{md:.1}" x2="{:.1}" y2="{md:.1}" stroke="black" stroke-width="2"/>"##,
            cx - BOX_WIDTH / 4.0,
            cx + BOX_WIDTH / 4.0,
            cx - BOX_WIDTH / 4.0,
            cx + BOX_WIDTH / 4.0,
            (y(s.q1) - y(s.q3)).max(0.5),
            left + BOX_WIDTH,
            label = escape(label),
            median = s.median,
            wh = y(s.whisker_high),
            wl = y(s.whisker_low),
            q1 = y(s.q1),
            q3 = y(s.q3),
            md = y(s.median),
        );
        for &o in &s.outliers {
            let _ = writeln!(
                svg,
                r#"<circle class="outlier" cx="{cx:.1}" cy="{:.1}" r="3" fill="none" stroke="black" data-value="{o}"/>"#,
                y(o)
            );
        }
        let _ = writeln!(
            svg,
            r#"</g>
<text x="{cx:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            axis_y + 20.0,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn format_tick(v: f64) -> String {
    if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.4}")
    }
}

/// Reads `metric` from a benchmark CSV and writes a boxplot SVG.
pub fn plot_boxplot(csv_path: &Path, out_svg_path: &Path, metric: Metric) -> Result<(), PlotError> {
    let groups = read_groups(csv_path, metric.column())?;
    if groups.is_empty() {
        return Err(PlotError::EmptyGroup);
    }
    let stats = groups
        .into_iter()
        .map(|(label, values)| BoxStats::from_values(&values).map(|s| (label, s)))
        .collect::<Result<Vec<_>, _>>()?;
    let svg = render_boxplot_svg(metric.column(), &stats);
    std::fs::write(out_svg_path, svg).map_err(|source| PlotError::Write {
        path: out_svg_path.to_path_buf(),
        source,
    })
}
