//! Deterministic SVG feature maps on a fixed 800×600 canvas.

use std::fmt::Write as _;
use std::str::FromStr;

use super::records::RecordRow;
use crate::error::{Error, Result};
use crate::stats::median;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvgKind {
    /// θ₁ by class, with median ticks.
    Strip1d,
    /// θ₁ against F1 at the 33 % landmark.
    Scatter2dF1,
    /// θ₁ against F0_66 − F0_33.
    Scatter2dDf0,
    /// a_tense against time, one polyline per force profile.
    Curves,
}

impl SvgKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Strip1d => "strip1d",
            Self::Scatter2dF1 => "scatter2d_f1",
            Self::Scatter2dDf0 => "scatter2d_df0",
            Self::Curves => "curves",
        }
    }
}

impl FromStr for SvgKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strip1d" => Ok(Self::Strip1d),
            "scatter2d_f1" => Ok(Self::Scatter2dF1),
            "scatter2d_df0" => Ok(Self::Scatter2dDf0),
            "curves" => Ok(Self::Curves),
            _ => Err(Error::Config(format!("unknown plot kind `{s}` (strip1d, scatter2d_f1, scatter2d_df0, curves)"))),
        }
    }
}

/// A labelled `(x, y)` series for [`emit_curves_svg`].
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, include_zero: bool) -> Self {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if include_zero {
            lo = lo.min(0.0);
            hi = hi.max(0.0);
        }
        let span = hi - lo;
        let pad = if span > 0.0 { 0.05 * span } else if lo != 0.0 { 0.05 * lo.abs() } else { 1.0 };
        Self { lo: lo - pad, hi: hi + pad }
    }

    fn frac(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }

    fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    fn ticks(&self) -> Vec<f64> {
        (0..=4).map(|i| self.lo + (self.hi - self.lo) * i as f64 / 4.0).collect()
    }
}

fn px_x(a: &Axis, v: f64) -> f64 {
    LEFT + a.frac(v) * (WIDTH - LEFT - RIGHT)
}

fn px_y(a: &Axis, v: f64) -> f64 {
    HEIGHT - BOTTOM - a.frac(v) * (HEIGHT - TOP - BOTTOM)
}

fn tick_label(v: f64, span: f64) -> String {
    let v = if v.abs() < 1e-12 * span.max(1.0) { 0.0 } else { v };
    if span >= 100.0 {
        format!("{v:.0}")
    } else if span >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.3}")
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Position-based jitter in `[-0.5, 0.5)`; depends only on the row index.
fn jitter(i: usize) -> f64 {
    let h = (i as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 40;
    (h % 1000) as f64 / 1000.0 - 0.5
}

struct Canvas {
    out: String,
}

impl Canvas {
    fn new(kind: &str, config_hash: &str, title: &str) -> Self {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
        );
        let _ = writeln!(out, "<!-- kind: {kind}; config_hash: {} -->", esc(config_hash));
        let _ = writeln!(out, "<rect class=\"background\" x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
        let _ = writeln!(
            out,
            "<text class=\"title\" x=\"{:.2}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">{}</text>",
            WIDTH / 2.0,
            esc(title)
        );
        Self { out }
    }

    fn frame(&mut self) {
        let _ = writeln!(
            self.out,
            "<rect class=\"plot-area\" x=\"{LEFT:.2}\" y=\"{TOP:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>",
            WIDTH - LEFT - RIGHT,
            HEIGHT - TOP - BOTTOM
        );
    }

    fn y_axis(&mut self, a: &Axis, label: &str) {
        for t in a.ticks() {
            let y = px_y(a, t);
            let _ = writeln!(
                self.out,
                "<line class=\"tick\" x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{LEFT:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>",
                LEFT - 5.0
            );
            let _ = writeln!(
                self.out,
                "<text class=\"tick-label\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-size=\"11\">{}</text>",
                LEFT - 8.0,
                y + 4.0,
                tick_label(t, a.hi - a.lo)
            );
        }
        let _ = writeln!(
            self.out,
            "<text class=\"axis-label\" x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 {:.2})\">{}</text>",
            (TOP + HEIGHT - BOTTOM) / 2.0,
            (TOP + HEIGHT - BOTTOM) / 2.0,
            esc(label)
        );
    }

    fn x_axis(&mut self, a: &Axis, label: &str) {
        let base = HEIGHT - BOTTOM;
        for t in a.ticks() {
            let x = px_x(a, t);
            let _ = writeln!(
                self.out,
                "<line class=\"tick\" x1=\"{x:.2}\" y1=\"{base:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
                base + 5.0
            );
            let _ = writeln!(
                self.out,
                "<text class=\"tick-label\" x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"11\">{}</text>",
                base + 20.0,
                tick_label(t, a.hi - a.lo)
            );
        }
        self.x_label(label);
    }

    fn x_label(&mut self, label: &str) {
        let _ = writeln!(
            self.out,
            "<text class=\"axis-label\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"13\">{}</text>",
            (LEFT + WIDTH - RIGHT) / 2.0,
            HEIGHT - 20.0,
            esc(label)
        );
    }

    fn zero_h(&mut self, a: &Axis) {
        if a.contains(0.0) {
            let y = px_y(a, 0.0);
            let _ = writeln!(
                self.out,
                "<line class=\"zero-line\" x1=\"{LEFT:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>",
                WIDTH - RIGHT
            );
        }
    }

    fn zero_v(&mut self, a: &Axis) {
        if a.contains(0.0) {
            let x = px_x(a, 0.0);
            let _ = writeln!(
                self.out,
                "<line class=\"zero-line\" x1=\"{x:.2}\" y1=\"{TOP:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>",
                HEIGHT - BOTTOM
            );
        }
    }

    fn legend(&mut self, labels: &[&str]) {
        for (i, l) in labels.iter().enumerate() {
            let y = TOP + 10.0 + 18.0 * i as f64;
            let x = WIDTH - RIGHT - 150.0;
            let _ = writeln!(
                self.out,
                "<rect class=\"legend-swatch\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"10\" height=\"10\" fill=\"{}\"/>",
                PALETTE[i % PALETTE.len()]
            );
            let _ = writeln!(
                self.out,
                "<text class=\"legend-label\" x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>",
                x + 16.0,
                y + 9.0,
                esc(l)
            );
        }
    }

    fn marker(&mut self, x: f64, y: f64, colour_index: usize, group: &str) {
        let _ = writeln!(
            self.out,
            "<circle class=\"marker\" data-group=\"{}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"{}\" fill-opacity=\"0.75\"/>",
            esc(group),
            PALETTE[colour_index % PALETTE.len()]
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn classes_in(rows: &[&RecordRow]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for r in rows {
        if !out.contains(&r.class_label) {
            out.push(r.class_label.clone());
        }
    }
    out
}

/// Plots `ok` records. `classes` restricts the selection; an empty
/// selection is an error naming the filter.
pub fn emit_svg(rows: &[RecordRow], kind: SvgKind, classes: Option<&[String]>) -> Result<String> {
    let needs_y = |r: &RecordRow| match kind {
        SvgKind::Strip1d => Some(0.0),
        SvgKind::Scatter2dF1 => r.f1_33_hz,
        SvgKind::Scatter2dDf0 => r.delta_f0_hz,
        SvgKind::Curves => None,
    };
    if kind == SvgKind::Curves {
        return Err(Error::Config("curves are drawn from force profiles, not records".into()));
    }
    let selected: Vec<&RecordRow> = rows
        .iter()
        .filter(|r| r.is_ok() && r.theta1_rad.is_some() && needs_y(r).is_some())
        .filter(|r| classes.is_none_or(|c| c.contains(&r.class_label)))
        .collect();
    if selected.is_empty() {
        let what = match kind {
            SvgKind::Scatter2dF1 => "theta1_rad and f1_33_hz",
            SvgKind::Scatter2dDf0 => "theta1_rad and delta_f0_hz",
            _ => "theta1_rad",
        };
        let filter = classes.map_or("all classes".to_string(), |c| format!("classes {c:?}"));
        return Err(Error::InsufficientData(format!(
            "no ok records with {what} for {} ({filter})",
            kind.as_str()
        )));
    }
    let hash = selected[0].config_hash.clone();
    let order = classes_in(&selected);
    let class_idx = |r: &RecordRow| order.iter().position(|c| *c == r.class_label).unwrap_or(0);
    let theta = |r: &RecordRow| r.theta1_rad.expect("selected");

    match kind {
        SvgKind::Strip1d => {
            let mut cv = Canvas::new("strip1d", &hash, "Formant angle θ1 by class");
            let ya = Axis::fit(selected.iter().map(|r| theta(r)), true);
            cv.frame();
            cv.y_axis(&ya, "θ1 (rad)");
            cv.zero_h(&ya);
            let band = (WIDTH - LEFT - RIGHT) / order.len() as f64;
            for (ci, c) in order.iter().enumerate() {
                let centre = LEFT + band * (ci as f64 + 0.5);
                let _ = writeln!(
                    cv.out,
                    "<text class=\"category-label\" x=\"{centre:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\">{}</text>",
                    HEIGHT - BOTTOM + 20.0,
                    esc(c)
                );
                let vals: Vec<f64> = selected.iter().filter(|r| r.class_label == *c).map(|r| theta(r)).collect();
                let m = median(&vals)?;
                let y = px_y(&ya, m);
                let _ = writeln!(
                    cv.out,
                    "<line class=\"median\" x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"black\" stroke-width=\"2\"/>",
                    centre - band * 0.3,
                    centre + band * 0.3
                );
            }
            cv.x_label("class");
            for (i, r) in selected.iter().enumerate() {
                let ci = class_idx(r);
                let x = LEFT + band * (ci as f64 + 0.5) + jitter(i) * band * 0.4;
                cv.marker(x, px_y(&ya, theta(r)), ci, &r.class_label);
            }
            Ok(cv.finish())
        }
        SvgKind::Scatter2dF1 | SvgKind::Scatter2dDf0 => {
            let (title, ylabel, y_of, zero_y): (&str, &str, fn(&RecordRow) -> f64, bool) = if kind == SvgKind::Scatter2dF1 {
                ("Formant angle θ1 and F1 at 33%", "F1_33 (Hz)", |r| r.f1_33_hz.expect("selected"), false)
            } else {
                ("Formant angle θ1 and F0_66 − F0_33", "ΔF0 (Hz)", |r| r.delta_f0_hz.expect("selected"), true)
            };
            let mut cv = Canvas::new(kind.as_str(), &hash, title);
            let xa = Axis::fit(selected.iter().map(|r| theta(r)), true);
            let ya = Axis::fit(selected.iter().map(|r| y_of(r)), zero_y);
            cv.frame();
            cv.x_axis(&xa, "θ1 (rad)");
            cv.y_axis(&ya, ylabel);
            cv.zero_v(&xa);
            if zero_y {
                cv.zero_h(&ya);
            }
            let labels: Vec<&str> = order.iter().map(String::as_str).collect();
            cv.legend(&labels);
            for r in &selected {
                cv.marker(px_x(&xa, theta(r)), px_y(&ya, y_of(r)), class_idx(r), &r.class_label);
            }
            Ok(cv.finish())
        }
        SvgKind::Curves => unreachable!("handled above"),
    }
}

/// a_tense (or any y) against time, one polyline per curve.
pub fn emit_curves_svg(curves: &[Curve], config_hash: &str) -> Result<String> {
    let pts = || curves.iter().flat_map(|c| c.points.iter());
    if pts().next().is_none() {
        return Err(Error::InsufficientData("no curve points for curves".into()));
    }
    if pts().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Domain("non-finite curve point".into()));
    }
    let xa = Axis::fit(pts().map(|p| p.0), false);
    let ya = Axis::fit(pts().map(|p| p.1), true);
    let mut cv = Canvas::new("curves", config_hash, "Acceleration of tenseness");
    cv.frame();
    cv.x_axis(&xa, "t (ds)");
    cv.y_axis(&ya, "a_tense (Bark/ds²)");
    cv.zero_h(&ya);
    let labels: Vec<&str> = curves.iter().map(|c| c.label.as_str()).collect();
    cv.legend(&labels);
    for (i, c) in curves.iter().enumerate() {
        let coords: Vec<String> = c.points.iter().map(|(x, y)| format!("{:.2},{:.2}", px_x(&xa, *x), px_y(&ya, *y))).collect();
        let _ = writeln!(
            cv.out,
            "<polyline class=\"curve\" data-group=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>",
            esc(&c.label),
            coords.join(" "),
            PALETTE[i % PALETTE.len()]
        );
    }
    Ok(cv.finish())
}
