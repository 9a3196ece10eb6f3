//! Deterministic SVG rendering for the report figures.
//!
//! Every plot is a derived view of a sibling CSV file, so the renderer
//! carries no state of its own: equal specs must produce byte-identical
//! documents. All coordinates go through fixed-precision formatting and
//! nothing time- or machine-dependent appears in the output.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 56.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Points on log-log axes with decade ticks.
    LogLogScatter,
    /// Points joined in order on linear axes.
    LineSeries,
}

/// Overlay line in log-log space: log10 y = intercept + slope * log10 x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedLine {
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub kind: PlotKind,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
    /// Drawn across the x range; ignored on linear axes.
    pub fitted: Option<FittedLine>,
}

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("plot needs at least one point")]
    Empty,
    #[error("coordinate ({x}, {y}) is not finite")]
    NonFinite { x: f64, y: f64 },
    #[error("log-log axes need strictly positive coordinates, got ({x}, {y})")]
    NonPositive { x: f64, y: f64 },
}

#[derive(Debug, Error)]
pub enum PlotWriteError {
    #[error(transparent)]
    Spec(#[from] PlotError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Axis range plus the tick positions inside it, in axis units
/// (log10 values on log axes).
struct Axis {
    lo: f64,
    hi: f64,
    ticks: Vec<(f64, String)>,
}

fn log_axis(min: f64, max: f64) -> Axis {
    let lo = min.log10().floor();
    let mut hi = max.log10().ceil();
    if hi <= lo {
        hi = lo + 1.0;
    }
    let ticks = (lo as i32..=hi as i32)
        .map(|k| (k as f64, decade_label(k)))
        .collect();
    Axis { lo, hi, ticks }
}

fn linear_axis(min: f64, max: f64) -> Axis {
    let (lo, hi) = if min == max {
        (min - 0.5, max + 0.5)
    } else {
        (min, max)
    };
    let ticks = (0..5)
        .map(|i| {
            let v = lo + (hi - lo) * i as f64 / 4.0;
            (v, tick_label(v))
        })
        .collect();
    Axis { lo, hi, ticks }
}

fn decade_label(k: i32) -> String {
    if (-4..=6).contains(&k) {
        format!("{}", 10f64.powi(k))
    } else {
        format!("1e{k}")
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            other => out.push(other),
        }
    }
    out
}

/// Clips a segment to the rectangle [lo_x, hi_x] x [lo_y, hi_y]
/// (Liang-Barsky); None when the segment misses it entirely.
fn clip_segment(
    (x1, y1): (f64, f64),
    (x2, y2): (f64, f64),
    (lo_x, hi_x): (f64, f64),
    (lo_y, hi_y): (f64, f64),
) -> Option<((f64, f64), (f64, f64))> {
    let (dx, dy) = (x2 - x1, y2 - y1);
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [
        (-dx, x1 - lo_x),
        (dx, hi_x - x1),
        (-dy, y1 - lo_y),
        (dy, hi_y - y1),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    Some((
        (x1 + t0 * dx, y1 + t0 * dy),
        (x1 + t1 * dx, y1 + t1 * dy),
    ))
}

/// Renders the spec as a standalone SVG 1.1 document.
pub fn render_plot(spec: &PlotSpec) -> Result<String, PlotError> {
    if spec.points.is_empty() {
        return Err(PlotError::Empty);
    }
    let log = spec.kind == PlotKind::LogLogScatter;
    for &(x, y) in &spec.points {
        if !(x.is_finite() && y.is_finite()) {
            return Err(PlotError::NonFinite { x, y });
        }
        if log && (x <= 0.0 || y <= 0.0) {
            return Err(PlotError::NonPositive { x, y });
        }
    }

    let to_axis = |v: f64| if log { v.log10() } else { v };
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for &(x, y) in &spec.points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    let make_axis = |min: f64, max: f64| {
        if log {
            log_axis(min, max)
        } else {
            linear_axis(min, max)
        }
    };
    let x_axis = make_axis(x_min, x_max);
    let y_axis = make_axis(y_min, y_max);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |v: f64| MARGIN_LEFT + (v - x_axis.lo) / (x_axis.hi - x_axis.lo) * plot_w;
    let py = |v: f64| HEIGHT - MARGIN_BOTTOM - (v - y_axis.lo) / (y_axis.hi - y_axis.lo) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"16\">{}</text>\n",
        WIDTH / 2.0,
        escape(&spec.title)
    ));

    for (v, label) in &x_axis.ticks {
        let x = px(*v);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            MARGIN_TOP,
            HEIGHT - MARGIN_BOTTOM
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            HEIGHT - MARGIN_BOTTOM + 18.0,
            escape(label)
        ));
    }
    for (v, label) in &y_axis.ticks {
        let y = py(*v);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            MARGIN_LEFT,
            WIDTH - MARGIN_RIGHT
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" \
             font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            MARGIN_LEFT - 8.0,
            y + 4.0,
            escape(label)
        ));
    }

    svg.push_str(&format!(
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"13\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        escape(&spec.x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"13\" transform=\"rotate(-90 18 {:.2})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(&spec.y_label)
    ));

    if log {
        if let Some(line) = &spec.fitted {
            let at = |x: f64| line.intercept + line.slope * x;
            if let Some(((cx1, cy1), (cx2, cy2))) = clip_segment(
                (x_axis.lo, at(x_axis.lo)),
                (x_axis.hi, at(x_axis.hi)),
                (x_axis.lo, x_axis.hi),
                (y_axis.lo, y_axis.hi),
            ) {
                svg.push_str(&format!(
                    "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
                     stroke=\"#d62728\" stroke-width=\"1.5\"/>\n",
                    px(cx1),
                    py(cy1),
                    px(cx2),
                    py(cy2)
                ));
            }
        }
    }

    if spec.kind == PlotKind::LineSeries {
        let path: Vec<String> = spec
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(to_axis(x)), py(to_axis(y))))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
    }
    let radius = if spec.kind == PlotKind::LineSeries { 2.5 } else { 3.0 };
    for &(x, y) in &spec.points {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{radius}\" fill=\"#1f77b4\"/>\n",
            px(to_axis(x)),
            py(to_axis(y))
        ));
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders and writes the spec, creating parent directories as needed.
pub fn emit_plot(spec: &PlotSpec, path: &Path) -> Result<(), PlotWriteError> {
    let svg = render_plot(spec)?;
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, svg)?;
    Ok(())
}
