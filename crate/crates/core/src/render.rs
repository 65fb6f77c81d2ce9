//! SVG 1.1 rendering of a [`PlotModel`].
//!
//! One vertical column per glyph. Densities are drawn as closed polygons
//! mirrored about the column axis; each density is scaled so its peak spans
//! `column_width_fraction` of the column. Output is byte-deterministic.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::engine::{BoxOverlay, GlyphKind, GlyphModel, PlotModel};
use crate::error::{Error, Result};
use crate::pde::DensityCurve;

const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 96.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderConfig {
    pub width_px: u32,
    pub height_px: u32,
    pub column_width_fraction: f64,
    pub glyph_fill: String,
    pub gaussian_color: String,
    pub box_color: String,
    pub reference_line_color: String,
    pub reference_lines: Vec<f64>,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self {
            width_px: 960,
            height_px: 600,
            column_width_fraction: 0.9,
            glyph_fill: "#bebebe".into(),
            gaussian_color: "#ff00ff".into(),
            box_color: "#000000".into(),
            reference_line_color: "#ff0000".into(),
            reference_lines: Vec::new(),
        }
    }
}

fn valid_color(c: &str) -> bool {
    match c.strip_prefix('#') {
        Some(hex) => matches!(hex.len(), 3 | 6) && hex.chars().all(|ch| ch.is_ascii_hexdigit()),
        None => !c.is_empty() && c.chars().all(|ch| ch.is_ascii_alphabetic()),
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.width_px == 0 || self.height_px == 0 {
            return Err(Error::BadConfig("image dimensions must be positive".into()));
        }
        if (self.width_px as f64) <= MARGIN_LEFT + MARGIN_RIGHT + 1.0
            || (self.height_px as f64) <= MARGIN_TOP + MARGIN_BOTTOM + 1.0
        {
            return Err(Error::BadConfig("image too small for the axis margins".into()));
        }
        if !(self.column_width_fraction > 0.0 && self.column_width_fraction <= 1.0) {
            return Err(Error::BadConfig("column_width_fraction must lie in (0, 1]".into()));
        }
        for c in [&self.glyph_fill, &self.gaussian_color, &self.box_color, &self.reference_line_color] {
            if !valid_color(c) {
                return Err(Error::BadConfig(format!("invalid color '{c}'")));
            }
        }
        if self.reference_lines.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadConfig("reference lines must be finite".into()));
        }
        Ok(())
    }
}

/// Maps data values to vertical pixel positions (larger values higher up).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisTransform {
    pub lo: f64,
    pub hi: f64,
    pub top_px: f64,
    pub bottom_px: f64,
}

impl AxisTransform {
    pub fn to_px(&self, v: f64) -> f64 {
        self.top_px + (self.hi - v) / (self.hi - self.lo) * (self.bottom_px - self.top_px)
    }

    pub fn to_value(&self, px: f64) -> f64 {
        self.hi - (px - self.top_px) / (self.bottom_px - self.top_px) * (self.hi - self.lo)
    }
}

/// Point of a mirrored outline: half-width in pixels from the column axis, and a data value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub half_width: f64,
    pub y: f64,
}

/// Density outline scaled by `width_scale` pixels per density unit.
pub fn density_path(curve: &DensityCurve, width_scale: f64) -> Vec<PathPoint> {
    curve
        .kernels
        .iter()
        .zip(&curve.densities)
        .map(|(&y, &d)| PathPoint { half_width: d * width_scale, y })
        .collect()
}

/// Normal density sampled at `kernels`, scaled like the glyph's density.
pub fn gaussian_overlay_path(mu: f64, sigma: f64, kernels: &[f64], width_scale: f64) -> Vec<PathPoint> {
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    kernels
        .iter()
        .map(|&y| {
            let z = (y - mu) / sigma;
            PathPoint {
                half_width: norm * (-0.5 * z * z).exp() * width_scale,
                y,
            }
        })
        .collect()
}

/// Largest horizontal gap between two outlines sampled at the same values.
pub fn max_slice_gap(a: &[PathPoint], b: &[PathPoint]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p.half_width - q.half_width).abs())
        .fold(0.0, f64::max)
}

/// Pixels per density unit so that the curve's peak spans `max_half_width`.
pub fn width_scale(curve: &DensityCurve, max_half_width: f64) -> f64 {
    let scale = max_half_width / curve.max_density();
    if scale.is_finite() {
        scale
    } else {
        0.0
    }
}

/// Between 6 and 10 ticks on a 1-2-2.5-5 grid when possible.
pub fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return vec![lo];
    }
    let span = hi - lo;
    let base = 10f64.powf((span / 10.0).log10().floor());
    let mut best: Option<(usize, f64)> = None;
    for mult in [1.0, 2.0, 2.5, 5.0, 10.0, 20.0, 25.0, 50.0] {
        let step = base * mult;
        let first = (lo / step).ceil() as i64;
        let last = (hi / step).floor() as i64;
        let count = (last - first + 1).max(0) as usize;
        let distance = if count < 6 { 6 - count } else { count.saturating_sub(10) };
        if best.is_none_or(|(d, _)| distance < d) {
            best = Some((distance, step));
        }
    }
    let step = best.map_or(span, |(_, s)| s);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = if step > 0.0 { (-step.log10().floor()).max(0.0) as usize } else { 0 };
    let s = format!("{:.*}", decimals.min(12), v);
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        // avoid "-0"
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && c != '\t' && c != '\n' && c != '\r' => out.push(' '),
            c => out.push(c),
        }
    }
    out
}

fn px(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

/// Column geometry shared by the renderer and its tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layout {
    pub axis: AxisTransform,
    pub left_px: f64,
    pub column_width: f64,
    pub max_half_width: f64,
}

impl Layout {
    pub fn new(model: &PlotModel, cfg: &RenderConfig) -> Self {
        let (mut lo, mut hi) = model.y_range;
        for &r in &cfg.reference_lines {
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if !(hi > lo) {
            lo -= 0.5;
            hi += 0.5;
        }
        let plot_w = cfg.width_px as f64 - MARGIN_LEFT - MARGIN_RIGHT;
        let column_width = plot_w / model.glyphs.len().max(1) as f64;
        Self {
            axis: AxisTransform {
                lo,
                hi,
                top_px: MARGIN_TOP,
                bottom_px: cfg.height_px as f64 - MARGIN_BOTTOM,
            },
            left_px: MARGIN_LEFT,
            column_width,
            max_half_width: column_width * cfg.column_width_fraction / 2.0,
        }
    }

    pub fn column_center(&self, i: usize) -> f64 {
        self.left_px + (i as f64 + 0.5) * self.column_width
    }
}

fn mirrored_polygon(path: &[PathPoint], center: f64, axis: &AxisTransform) -> String {
    let mut pts = Vec::with_capacity(path.len() * 2);
    for p in path {
        pts.push(format!("{},{}", px(center + p.half_width), px(axis.to_px(p.y))));
    }
    for p in path.iter().rev() {
        pts.push(format!("{},{}", px(center - p.half_width), px(axis.to_px(p.y))));
    }
    pts.join(" ")
}

fn polyline(path: &[PathPoint], center: f64, sign: f64, axis: &AxisTransform) -> String {
    path.iter()
        .map(|p| format!("{},{}", px(center + sign * p.half_width), px(axis.to_px(p.y))))
        .collect::<Vec<_>>()
        .join(" ")
}

fn draw_box(out: &mut String, b: &BoxOverlay, center: f64, layout: &Layout, color: &str) {
    let axis = &layout.axis;
    let half = layout.column_width * 0.08;
    let (y25, y50, y75) = (axis.to_px(b.q25), axis.to_px(b.median), axis.to_px(b.q75));
    let (ylo, yhi) = (axis.to_px(b.whisker_low), axis.to_px(b.whisker_high));
    let _ = writeln!(
        out,
        r#"<g class="box" stroke="{color}" fill="none" stroke-width="1"><rect x="{}" y="{}" width="{}" height="{}"/><line x1="{}" y1="{}" x2="{}" y2="{}" stroke-width="2"/><line x1="{c}" y1="{}" x2="{c}" y2="{}"/><line x1="{c}" y1="{}" x2="{c}" y2="{}"/></g>"#,
        px(center - half),
        px(y75),
        px(2.0 * half),
        px(y25 - y75),
        px(center - half),
        px(y50),
        px(center + half),
        px(y50),
        px(y75),
        px(yhi),
        px(y25),
        px(ylo),
        c = px(center),
    );
}

fn draw_glyph(out: &mut String, g: &GlyphModel, i: usize, layout: &Layout, cfg: &RenderConfig) {
    let center = layout.column_center(i);
    let axis = &layout.axis;
    let _ = writeln!(out, r#"<g class="glyph" data-feature="{}">"#, escape(&g.feature));
    match &g.kind {
        GlyphKind::Density { curve } => {
            let scale = width_scale(curve, layout.max_half_width);
            let path = density_path(curve, scale);
            let _ = writeln!(
                out,
                r#"<polygon class="density" fill="{}" stroke="black" stroke-width="0.5" points="{}"/>"#,
                cfg.glyph_fill,
                mirrored_polygon(&path, center, axis)
            );
            if let Some(ov) = &g.gaussian_overlay {
                let gp = gaussian_overlay_path(ov.mu, ov.sigma, &curve.kernels, scale);
                for sign in [1.0, -1.0] {
                    let _ = writeln!(
                        out,
                        r#"<polyline class="gaussian" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                        cfg.gaussian_color,
                        polyline(&gp, center, sign, axis)
                    );
                }
            }
        }
        GlyphKind::Jitter { points } => {
            for p in points {
                let _ = writeln!(
                    out,
                    r#"<circle class="jitter" cx="{}" cy="{}" r="1.5" fill="{}" stroke="black" stroke-width="0.3"/>"#,
                    px(center + p.offset * layout.column_width),
                    px(axis.to_px(p.value)),
                    cfg.glyph_fill
                );
            }
        }
        GlyphKind::DiracLine { value } => {
            let y = px(axis.to_px(*value));
            let _ = writeln!(
                out,
                r#"<line class="dirac" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="black" stroke-width="2"/>"#,
                px(center - layout.max_half_width),
                px(center + layout.max_half_width),
            );
        }
    }
    if let Some(b) = &g.box_overlay {
        draw_box(out, b, center, layout, &cfg.box_color);
    }
    out.push_str("</g>\n");
}

pub fn render_svg(model: &PlotModel, cfg: &RenderConfig) -> Result<String> {
    if model.glyphs.is_empty() {
        return Err(Error::NoPlottableFeatures);
    }
    model.validate()?;
    cfg.validate()?;
    let layout = Layout::new(model, cfg);
    let axis = &layout.axis;
    let (w, h) = (cfg.width_px, cfg.height_px);
    let right = w as f64 - MARGIN_RIGHT;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    if !model.title.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            px(w as f64 / 2.0),
            escape(&model.title)
        );
    }

    // y axis
    let _ = writeln!(
        out,
        r##"<g class="axis" stroke="black" stroke-width="1"><line x1="{l}" y1="{}" x2="{l}" y2="{}"/></g>"##,
        px(axis.top_px),
        px(axis.bottom_px),
        l = px(MARGIN_LEFT),
    );
    let ticks = nice_ticks(axis.lo, axis.hi);
    let step = if ticks.len() > 1 { ticks[1] - ticks[0] } else { axis.hi - axis.lo };
    for t in &ticks {
        let y = px(axis.to_px(*t));
        let _ = writeln!(
            out,
            r#"<g class="tick"><line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="black"/><text x="{}" y="{y}" text-anchor="end" dominant-baseline="middle">{}</text></g>"#,
            px(MARGIN_LEFT - 5.0),
            px(MARGIN_LEFT),
            px(MARGIN_LEFT - 8.0),
            tick_label(*t, step)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="16" y="{y}" text-anchor="middle" transform="rotate(-90 16 {y})">{}</text>"#,
        escape(&model.y_label),
        y = px((axis.top_px + axis.bottom_px) / 2.0),
    );

    for (i, g) in model.glyphs.iter().enumerate() {
        draw_glyph(&mut out, g, i, &layout, cfg);
        let x = px(layout.column_center(i));
        let y = px(axis.bottom_px + 14.0);
        let _ = writeln!(
            out,
            r#"<text class="label" x="{x}" y="{y}" text-anchor="end" transform="rotate(-45 {x} {y})">{}</text>"#,
            escape(&g.feature)
        );
    }

    for &r in &cfg.reference_lines {
        let y = px(axis.to_px(r));
        let _ = writeln!(
            out,
            r#"<line class="reference" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="1"/>"#,
            px(MARGIN_LEFT),
            px(right),
            cfg.reference_line_color
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_peak_and_symmetry() {
        let kernels: Vec<f64> = (0..=200).map(|i| -5.0 + i as f64 * 0.05).collect();
        let p = gaussian_overlay_path(0.0, 1.3, &kernels, 1.0);
        let peak = p.iter().cloned().fold(p[0], |a, b| if b.half_width > a.half_width { b } else { a });
        assert!(peak.y.abs() < 1e-12);
        for i in 0..p.len() {
            let j = p.len() - 1 - i;
            assert!((p[i].half_width - p[j].half_width).abs() < 1e-12);
        }
    }

    #[test]
    fn ticks_count() {
        for (lo, hi) in [(0.0, 1.0), (-2.04, 2.04), (1800.0, 6000.0), (0.0, 100.0), (-3.3, 17.9), (1e-6, 3e-6)] {
            let t = nice_ticks(lo, hi);
            assert!((6..=10).contains(&t.len()), "{lo}..{hi}: {t:?}");
            assert!(t.iter().all(|&v| v >= lo - 1e-12 && v <= hi + 1e-12));
        }
    }

    #[test]
    fn tick_labels() {
        assert_eq!(tick_label(0.5, 0.5), "0.5");
        assert_eq!(tick_label(2000.0, 500.0), "2000");
        assert_eq!(tick_label(-0.0, 0.2), "0.0");
    }

    #[test]
    fn axis_round_trip() {
        let a = AxisTransform { lo: -3.0, hi: 7.0, top_px: 36.0, bottom_px: 504.0 };
        for v in [-3.0, 0.0, 1.234, 7.0] {
            assert!((a.to_value(a.to_px(v)) - v).abs() < 1e-9);
        }
        assert!(a.to_px(7.0) < a.to_px(-3.0));
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("a<b&\"c\""), "a&lt;b&amp;&quot;c&quot;");
    }

    #[test]
    fn config_validation() {
        assert!(RenderConfig::default().validate().is_ok());
        let bad = |f: fn(&mut RenderConfig)| {
            let mut c = RenderConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.width_px = 0));
        assert!(bad(|c| c.column_width_fraction = 0.0));
        assert!(bad(|c| c.column_width_fraction = 1.5));
        assert!(bad(|c| c.glyph_fill = "url(#x)".into()));
        assert!(bad(|c| c.gaussian_color = "#12".into()));
        assert!(bad(|c| c.reference_lines = vec![f64::NAN]));
        let named = RenderConfig { glyph_fill: "gray".into(), ..RenderConfig::default() };
        assert!(named.validate().is_ok());
    }
}
