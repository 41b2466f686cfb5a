//! Minimal hand-written SVG plots.
//!
//! Output depends only on the data: coordinates are printed with a fixed
//! number of decimals and nothing time- or locale-dependent is embedded, so
//! identical inputs give byte-identical files.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::io;
use std::path::Path;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 52.0;
const TICKS: usize = 5;
const PALETTE: [&str; 4] = ["#1f5fa8", "#c0392b", "#2a8a4a", "#7d3c98"];

/// What is being plotted; fixes axes, scales and decorations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Meridian `(x, z)` of an unduloid, drawn as a polyline.
    Profile,
    /// `(ε, γ_c·ε)` markers on a log-ε axis with the reference level `8π`.
    BoundaryCurve,
    /// Diagnostics against `N` on a log axis, lines with markers.
    Uniformity,
}

/// A named sequence of points.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.into(), points }
    }
}

#[derive(Debug)]
pub enum PlotError {
    Empty,
    NonFinite,
    /// A log axis got a non-positive coordinate.
    NonPositive,
    Io(io::Error),
}

impl fmt::Display for PlotError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlotError::Empty => write!(f, "nothing to plot"),
            PlotError::NonFinite => write!(f, "plot data contains a non-finite value"),
            PlotError::NonPositive => write!(f, "log-scaled plot axis needs positive values"),
            PlotError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PlotError {}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo <= 1e-12 * hi.abs().max(1.0) {
            let pad = if log { 0.5 } else { 0.1 * hi.abs().max(1.0) };
            return Axis { lo: lo - pad, hi: hi + pad, log };
        }
        let pad = 0.05 * (hi - lo);
        Axis { lo: lo - pad, hi: hi + pad, log }
    }

    /// Position in `[0, 1]` along the axis.
    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<f64> {
        (0..TICKS)
            .map(|i| {
                let s = self.lo + (self.hi - self.lo) * i as f64 / (TICKS - 1) as f64;
                if self.log {
                    10f64.powf(s)
                } else {
                    s
                }
            })
            .collect()
    }
}

fn px(x: &Axis, v: f64) -> f64 {
    LEFT + x.frac(v) * (WIDTH - LEFT - RIGHT)
}

fn py(y: &Axis, v: f64) -> f64 {
    HEIGHT - BOTTOM - y.frac(v) * (HEIGHT - TOP - BOTTOM)
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if (1e-2..1e4).contains(&v.abs()) {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `series` as a standalone SVG document.
pub fn render_svg(kind: PlotKind, series: &[Series]) -> Result<String, PlotError> {
    if series.iter().all(|s| s.points.is_empty()) {
        return Err(PlotError::Empty);
    }
    let pts = || series.iter().flat_map(|s| s.points.iter().copied());
    if pts().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(PlotError::NonFinite);
    }
    let (title, xlabel, ylabel, log_x) = match kind {
        PlotKind::Profile => ("Unduloid profile", "x", "z", false),
        PlotKind::BoundaryCurve => ("Two-charge existence threshold", "ε", "γ_c · ε", true),
        PlotKind::Uniformity => ("Uniformity of optimized charges", "N", "value", true),
    };
    if log_x && pts().any(|(x, _)| x <= 0.0) {
        return Err(PlotError::NonPositive);
    }
    let reference = (kind == PlotKind::BoundaryCurve).then_some(8.0 * PI);
    let xa = Axis::fit(pts().map(|p| p.0), log_x);
    let ya = Axis::fit(pts().map(|p| p.1).chain(reference), false);

    let mut s = String::new();
    let w = &mut s;
    // writing to a String cannot fail
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(w, r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{title}</text>"#, WIDTH / 2.0);
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(w, r#"<path class="axes" d="M{x0:.2},{y1:.2} V{y0:.2} H{x1:.2}" fill="none" stroke="black"/>"#);
    for t in xa.ticks() {
        let x = px(&xa, t);
        let _ = writeln!(w, r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(w, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, y0 + 18.0, tick_label(t));
    }
    for t in ya.ticks() {
        let y = py(&ya, t);
        let _ = writeln!(w, r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ =
            writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, x0 - 8.0, y + 4.0, tick_label(t));
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        escape(xlabel)
    );
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
    if let Some(r) = reference {
        let y = py(&ya, r);
        let _ = writeln!(
            w,
            r#"<line class="reference" x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="gray" stroke-dasharray="6 4"/>"#
        );
        let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="end" fill="gray">8π</text>"#, x1 - 4.0, y - 6.0);
    }
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> =
            ser.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(&xa, x), py(&ya, y))).collect();
        if kind != PlotKind::BoundaryCurve && coords.len() > 1 {
            let _ = writeln!(
                w,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                coords.join(" ")
            );
        }
        if kind != PlotKind::Profile {
            for &(x, y) in &ser.points {
                let _ =
                    writeln!(w, r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}"/>"#, px(&xa, x), py(&ya, y));
            }
        }
        if series.len() > 1 {
            let ly = TOP + 14.0 + 16.0 * i as f64;
            let _ = writeln!(
                w,
                r#"<text x="{:.2}" y="{ly:.2}" text-anchor="end" fill="{color}">{}</text>"#,
                x1 - 4.0,
                escape(&ser.name)
            );
        }
    }
    let _ = writeln!(w, "</svg>");
    Ok(s)
}

/// Renders and writes the plot. Nothing is created when rendering fails.
pub fn emit_plot(kind: PlotKind, series: &[Series], path: &Path) -> Result<(), PlotError> {
    let svg = render_svg(kind, series)?;
    std::fs::write(path, svg).map_err(PlotError::Io)
}
