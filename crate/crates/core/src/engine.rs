//! Per-feature analysis and plot-model assembly.
//!
//! Each feature is subsampled, transformed, routed to a glyph (density,
//! jitter or Dirac line), tested, and finally ordered. Features are
//! independent: one failing feature is reported and skipped, never aborting
//! the others.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::{gate_passes, test_report, TestReport, DEFAULT_REPLICATES};
use crate::pde::{pde_estimate, DensityCurve, PdeConfig};
use crate::rng;
use crate::stats::{describe, quantile, robust_gaussian_fit, transform, DescriptiveStats, FeatureSeries, ScalingMode};

pub const SCHEMA_VERSION: u32 = 1;
pub const JITTER_AMPLITUDE: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureOrdering {
    #[default]
    Default,
    Columnwise,
    Alphabetical,
    Statistics,
}

impl FeatureOrdering {
    pub const ALL: [FeatureOrdering; 4] = [
        FeatureOrdering::Default,
        FeatureOrdering::Columnwise,
        FeatureOrdering::Alphabetical,
        FeatureOrdering::Statistics,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureOrdering::Default => "default",
            FeatureOrdering::Columnwise => "columnwise",
            FeatureOrdering::Alphabetical => "alphabetical",
            FeatureOrdering::Statistics => "statistics",
        }
    }
}

impl fmt::Display for FeatureOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        FeatureOrdering::ALL
            .into_iter()
            .find(|m| m.as_str() == lower)
            .ok_or_else(|| Error::Parse(format!("unknown ordering '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Total number of cells kept across all features.
    pub sample_size_cap: usize,
    pub min_data: usize,
    pub min_unique: usize,
    pub alpha: f64,
    /// Monte Carlo replicates for the dip p-value.
    pub replicates: usize,
    pub scaling: ScalingMode,
    pub ordering: FeatureOrdering,
    pub robust_gaussian: bool,
    pub boxplot_overlay: bool,
    pub seed: u64,
    pub pde: PdeConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            sample_size_cap: 500_000,
            min_data: 50,
            min_unique: 12,
            alpha: 0.05,
            replicates: DEFAULT_REPLICATES,
            scaling: ScalingMode::None,
            ordering: FeatureOrdering::Default,
            robust_gaussian: true,
            boxplot_overlay: false,
            seed: 0,
            pde: PdeConfig::default(),
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_data < 2 {
            return Err(Error::BadConfig("min_data must be at least 2".into()));
        }
        if self.min_unique < 1 {
            return Err(Error::BadConfig("min_unique must be at least 1".into()));
        }
        if self.sample_size_cap < self.min_data {
            return Err(Error::BadConfig("sample_size_cap must be at least min_data".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::BadConfig("alpha must lie in (0, 1)".into()));
        }
        if self.replicates == 0 {
            return Err(Error::BadConfig("replicates must be positive".into()));
        }
        self.pde.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitterPoint {
    pub value: f64,
    /// Horizontal offset in column widths, within `[-0.3, 0.3]`.
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GlyphKind {
    Density { curve: DensityCurve },
    Jitter { points: Vec<JitterPoint> },
    DiracLine { value: f64 },
}

impl GlyphKind {
    pub fn name(&self) -> &'static str {
        match self {
            GlyphKind::Density { .. } => "density",
            GlyphKind::Jitter { .. } => "jitter",
            GlyphKind::DiracLine { .. } => "dirac_line",
        }
    }

    /// Lowest and highest data value the glyph covers.
    pub fn extent(&self) -> (f64, f64) {
        match self {
            GlyphKind::Density { curve } => (curve.kernels[0], curve.kernels[curve.len() - 1]),
            GlyphKind::Jitter { points } => points
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.value), hi.max(p.value))),
            GlyphKind::DiracLine { value } => (*value, *value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianOverlay {
    pub mu: f64,
    pub sigma: f64,
    /// Normal density evaluated at the glyph's kernels.
    pub curve: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxOverlay {
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlyphModel {
    pub feature: String,
    pub kind: GlyphKind,
    pub gaussian_overlay: Option<GaussianOverlay>,
    pub box_overlay: Option<BoxOverlay>,
    pub report: Option<TestReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeClass {
    Nonunimodal,
    Skewed,
    GaussianLike,
    Discrete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureAnalysis {
    pub name: String,
    pub stats: DescriptiveStats,
    pub report: Option<TestReport>,
    pub shape_class: ShapeClass,
    pub radius: Option<f64>,
    pub glyph_kind: String,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipDiagnostic {
    pub feature: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotModel {
    pub schema_version: u32,
    pub title: String,
    pub y_label: String,
    pub scaling_applied: ScalingMode,
    pub y_range: (f64, f64),
    pub glyphs: Vec<GlyphModel>,
    /// Same order as `glyphs`.
    pub analyses: Vec<FeatureAnalysis>,
    pub skipped: Vec<SkipDiagnostic>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidModel(msg.into())
}

impl GlyphModel {
    /// Structural checks for models that did not come from [`build_plot_model`].
    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        match &self.kind {
            GlyphKind::Density { curve } => {
                if curve.is_empty() || curve.kernels.len() != curve.densities.len() {
                    return Err(invalid(format!("{}: empty or ragged density curve", self.feature)));
                }
                if !curve.kernels.iter().all(|&k| finite(k)) || !curve.kernels.windows(2).all(|w| w[0] <= w[1]) {
                    return Err(invalid(format!("{}: kernels must be finite and sorted", self.feature)));
                }
                if !curve.densities.iter().all(|&d| finite(d) && d >= 0.0) {
                    return Err(invalid(format!("{}: densities must be finite and non-negative", self.feature)));
                }
                if let Some(o) = &self.gaussian_overlay {
                    if !(finite(o.mu) && o.sigma > 0.0 && finite(1.0 / o.sigma)) {
                        return Err(invalid(format!("{}: bad overlay parameters", self.feature)));
                    }
                }
            }
            GlyphKind::Jitter { points } => {
                if points.is_empty() || !points.iter().all(|p| finite(p.value) && p.offset.abs() <= JITTER_AMPLITUDE) {
                    return Err(invalid(format!("{}: bad jitter points", self.feature)));
                }
            }
            GlyphKind::DiracLine { value } => {
                if !finite(*value) {
                    return Err(invalid(format!("{}: non-finite line", self.feature)));
                }
            }
        }
        if self.gaussian_overlay.is_some() && !matches!(self.kind, GlyphKind::Density { .. }) {
            return Err(invalid(format!("{}: gaussian overlay on a {} glyph", self.feature, self.kind.name())));
        }
        if let Some(b) = &self.box_overlay {
            let marks = [b.whisker_low, b.q25, b.median, b.q75, b.whisker_high];
            if !marks.iter().all(|&v| finite(v)) || !marks.windows(2).all(|w| w[0] <= w[1]) {
                return Err(invalid(format!("{}: box marks out of order", self.feature)));
            }
        }
        Ok(())
    }
}

impl PlotModel {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.y_range;
        if !(lo <= hi && (hi - lo).is_finite()) {
            return Err(invalid("y_range must be finite and increasing"));
        }
        for g in &self.glyphs {
            g.validate()?;
            let (a, b) = g.kind.extent();
            if a < lo || b > hi {
                return Err(invalid(format!("{}: glyph extends beyond y_range", g.feature)));
            }
        }
        Ok(())
    }
}

/// Seeded uniform sample without replacement, original order kept.
pub fn subsample(f: &FeatureSeries, cap: usize, seed: u64) -> FeatureSeries {
    let cap = cap.max(1);
    if f.len() <= cap {
        return f.clone();
    }
    let mut r = rng::stream(seed, 1);
    let mut idx = index::sample(&mut r, f.len(), cap).into_vec();
    idx.sort_unstable();
    let v = f.values();
    f.with_values(idx.into_iter().map(|i| v[i]).collect())
}

/// Base-2 radical inverse of `i`.
fn van_der_corput(mut i: u64) -> f64 {
    let mut x = 0.0;
    let mut scale = 0.5;
    while i > 0 {
        if i & 1 == 1 {
            x += scale;
        }
        i >>= 1;
        scale *= 0.5;
    }
    x
}

/// Low-discrepancy offsets with a seeded rotation.
fn jitter_points(sorted: &[f64], seed: u64) -> Vec<JitterPoint> {
    let shift: f64 = rng::stream(seed, 2).random();
    sorted
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let u = (van_der_corput(i as u64 + 1) + shift).fract();
            JitterPoint {
                value,
                offset: (2.0 * u - 1.0) * JITTER_AMPLITUDE,
            }
        })
        .collect()
}

fn box_overlay(sorted: &[f64]) -> Result<BoxOverlay> {
    let q25 = quantile(sorted, 0.25)?;
    let median = quantile(sorted, 0.5)?;
    let q75 = quantile(sorted, 0.75)?;
    let fence = 1.5 * (q75 - q25);
    let whisker_low = sorted.iter().copied().find(|&x| x >= q25 - fence).unwrap_or(q25).min(q25);
    let whisker_high = sorted.iter().rev().copied().find(|&x| x <= q75 + fence).unwrap_or(q75).max(q75);
    Ok(BoxOverlay {
        q25,
        median,
        q75,
        whisker_low,
        whisker_high,
    })
}

fn shape_of(report: &TestReport, alpha: f64) -> ShapeClass {
    if report.dip_p < alpha {
        ShapeClass::Nonunimodal
    } else if report.skew_p < alpha {
        ShapeClass::Skewed
    } else {
        ShapeClass::GaussianLike
    }
}

/// Seed for the dip null table of one feature, kept apart from the other streams.
fn null_seed(feature_seed: u64) -> u64 {
    feature_seed ^ rng::stable_hash("dip-null")
}

/// Analyzes an already subsampled and transformed feature.
pub fn analyze_feature(f: &FeatureSeries, cfg: &EngineConfig) -> Result<(GlyphModel, FeatureAnalysis)> {
    if f.is_empty() {
        return Err(Error::EmptyFeature);
    }
    let seed = rng::feature_seed(cfg.seed, &f.name);
    let stats = describe(f)?;
    let sorted = f.sorted_values();
    let unique = f.unique_count();
    let mut diagnostics = Vec::new();

    let box_overlay = if cfg.boxplot_overlay {
        Some(box_overlay(&sorted)?)
    } else {
        None
    };

    let discrete = |kind: GlyphKind, diagnostics: Vec<String>| {
        let analysis = FeatureAnalysis {
            name: f.name.clone(),
            stats: stats.clone(),
            report: None,
            shape_class: ShapeClass::Discrete,
            radius: None,
            glyph_kind: kind.name().to_string(),
            diagnostics,
        };
        let glyph = GlyphModel {
            feature: f.name.clone(),
            kind,
            gaussian_overlay: None,
            box_overlay,
            report: None,
        };
        Ok((glyph, analysis))
    };

    if unique == 1 {
        return discrete(GlyphKind::DiracLine { value: sorted[0] }, diagnostics);
    }
    if f.len() < cfg.min_data || unique < cfg.min_unique {
        diagnostics.push(format!(
            "n = {} (min {}), unique = {} (min {}): jittered scatter",
            f.len(),
            cfg.min_data,
            unique,
            cfg.min_unique
        ));
        return discrete(GlyphKind::Jitter { points: jitter_points(&sorted, seed) }, diagnostics);
    }

    let curve = match pde_estimate(&sorted, &cfg.pde, seed) {
        Ok(c) => c,
        Err(e) => {
            diagnostics.push(format!("density estimation failed: {e}"));
            return discrete(GlyphKind::Jitter { points: jitter_points(&sorted, seed) }, diagnostics);
        }
    };

    let report = match test_report(f.values(), cfg.replicates, null_seed(seed)) {
        Ok(r) => Some(r),
        Err(e) => {
            diagnostics.push(format!("tests not evaluated: {e}"));
            None
        }
    };
    // untested densities make no unimodality claim
    let shape_class = report.as_ref().map_or(ShapeClass::Nonunimodal, |r| shape_of(r, cfg.alpha));

    let gaussian_overlay = match &report {
        Some(r) if cfg.robust_gaussian && gate_passes(r, cfg.alpha) => match robust_gaussian_fit(f) {
            Ok(g) => Some(GaussianOverlay {
                mu: g.mu,
                sigma: g.sigma,
                curve: curve.kernels.iter().map(|&k| g.pdf(k)).collect(),
            }),
            Err(e) => {
                diagnostics.push(format!("no Gaussian overlay: {e}"));
                None
            }
        },
        _ => None,
    };

    let radius = Some(curve.radius);
    let analysis = FeatureAnalysis {
        name: f.name.clone(),
        stats,
        report: report.clone(),
        shape_class,
        radius,
        glyph_kind: "density".to_string(),
        diagnostics,
    };
    let glyph = GlyphModel {
        feature: f.name.clone(),
        kind: GlyphKind::Density { curve },
        gaussian_overlay,
        box_overlay,
        report,
    };
    Ok((glyph, analysis))
}

fn statistics_cmp(a: &FeatureAnalysis, b: &FeatureAnalysis) -> Ordering {
    let rank = |x: &FeatureAnalysis| match (&x.shape_class, &x.report) {
        (ShapeClass::Discrete, _) => 2,
        (_, None) => 1,
        _ => 0,
    };
    rank(a).cmp(&rank(b)).then_with(|| match (&a.report, &b.report) {
        (Some(ra), Some(rb)) => rb
            .dip_p
            .total_cmp(&ra.dip_p)
            .then_with(|| ra.skew_z.abs().total_cmp(&rb.skew_z.abs())),
        _ => Ordering::Equal,
    })
    .then_with(|| a.name.cmp(&b.name))
}

/// Permutation of `analyses` indices in display order.
pub fn order_features(analyses: &[FeatureAnalysis], mode: FeatureOrdering) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..analyses.len()).collect();
    match mode {
        FeatureOrdering::Columnwise => {}
        FeatureOrdering::Alphabetical => {
            idx.sort_by(|&i, &j| analyses[i].name.cmp(&analyses[j].name).then(i.cmp(&j)))
        }
        FeatureOrdering::Statistics | FeatureOrdering::Default => {
            idx.sort_by(|&i, &j| statistics_cmp(&analyses[i], &analyses[j]).then(i.cmp(&j)))
        }
    }
    idx
}

fn y_range(glyphs: &[GlyphModel]) -> (f64, f64) {
    let (lo, hi) = glyphs
        .iter()
        .map(|g| g.kind.extent())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| (lo.min(a), hi.max(b)));
    let span = hi - lo;
    if span > 0.0 {
        let pad = 0.01 * span;
        (lo - pad, hi + pad)
    } else {
        let pad = (lo.abs() * 0.01).max(0.5);
        (lo - pad, hi + pad)
    }
}

/// Subsample, transform and analyze one input feature.
fn prepare_and_analyze(
    f: &FeatureSeries,
    cap: usize,
    cfg: &EngineConfig,
) -> Result<(GlyphModel, FeatureAnalysis)> {
    if f.is_empty() {
        return Err(Error::EmptyFeature);
    }
    let seed = rng::feature_seed(cfg.seed, &f.name);
    let sampled = subsample(f, cap, seed);
    let (scaled, note) = match transform(&sampled, cfg.scaling) {
        Ok(t) => (t, None),
        Err(Error::ConstantFeature) => (
            sampled,
            Some(format!("{} scaling undefined for zero spread; values kept", cfg.scaling)),
        ),
        Err(e) => return Err(e),
    };
    let (glyph, mut analysis) = analyze_feature(&scaled, cfg)?;
    if let Some(note) = note {
        analysis.diagnostics.push(note);
    }
    Ok((glyph, analysis))
}

pub fn build_plot_model(features: &[FeatureSeries], cfg: &EngineConfig) -> Result<PlotModel> {
    cfg.validate()?;
    if features.is_empty() {
        return Err(Error::NoPlottableFeatures);
    }
    let cap = (cfg.sample_size_cap / features.len()).max(cfg.min_data);
    let results: Vec<_> = features
        .par_iter()
        .map(|f| prepare_and_analyze(f, cap, cfg))
        .collect();

    let mut glyphs = Vec::new();
    let mut analyses = Vec::new();
    let mut skipped = Vec::new();
    for (f, res) in features.iter().zip(results) {
        match res {
            Ok((g, a)) => {
                glyphs.push(g);
                analyses.push(a);
            }
            Err(e) => skipped.push(SkipDiagnostic {
                feature: f.name.clone(),
                reason: e.to_string(),
            }),
        }
    }
    if glyphs.is_empty() {
        return Err(Error::NoPlottableFeatures);
    }

    let order = order_features(&analyses, cfg.ordering);
    let mut slots: Vec<Option<(GlyphModel, FeatureAnalysis)>> = glyphs.into_iter().zip(analyses).map(Some).collect();
    let (glyphs, analyses): (Vec<_>, Vec<_>) = order.iter().map(|&i| slots[i].take().expect("permutation")).unzip();

    Ok(PlotModel {
        schema_version: SCHEMA_VERSION,
        title: String::new(),
        y_label: match cfg.scaling {
            ScalingMode::None => "value".to_string(),
            s => format!("value ({s})"),
        },
        scaling_applied: cfg.scaling,
        y_range: y_range(&glyphs),
        glyphs,
        analyses,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg() -> EngineConfig {
        EngineConfig {
            replicates: 200,
            ..EngineConfig::default()
        }
    }

    #[test]
    fn subsample_examples() {
        let f = FeatureSeries::new("a", (0..100).map(f64::from));
        assert_eq!(subsample(&f, 500_000, 1), f);
        let big = FeatureSeries::new("b", (0..1_000_000).map(f64::from));
        let s = subsample(&big, 100_000, 1);
        assert_eq!(s.len(), 100_000);
        assert!(s.values().iter().all(|&v| (0.0..1e6).contains(&v) && v.fract() == 0.0));
        assert_eq!(s, subsample(&big, 100_000, 1));
        assert_eq!(s.name, "b");
    }

    #[test]
    fn subsample_keeps_missing_count() {
        let f = FeatureSeries::from_cells("m", (0..10).map(|i| if i % 2 == 0 { Some(i as f64) } else { None }));
        let s = subsample(&f, 2, 0);
        assert_eq!(s.len(), 2);
        assert_eq!(s.missing_count, 5);
    }

    #[test]
    fn van_der_corput_prefix() {
        let v: Vec<f64> = (1..=4).map(van_der_corput).collect();
        assert_eq!(v, vec![0.5, 0.25, 0.75, 0.125]);
    }

    #[test]
    fn small_feature_is_jittered() {
        let f = FeatureSeries::new("few", (0..40).map(|i| i as f64 * 0.37));
        let (g, a) = analyze_feature(&f, &quick_cfg()).unwrap();
        assert!(matches!(g.kind, GlyphKind::Jitter { .. }));
        assert!(g.report.is_none() && a.report.is_none());
        assert_eq!(a.shape_class, ShapeClass::Discrete);
        if let GlyphKind::Jitter { points } = &g.kind {
            assert_eq!(points.len(), 40);
            assert!(points.iter().all(|p| p.offset.abs() <= JITTER_AMPLITUDE));
        }
        let (again, _) = analyze_feature(&f, &quick_cfg()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn quantized_states_are_jittered() {
        let f = FeatureSeries::new("err", (0..100).map(|i| if i % 3 == 0 { 0.12 } else { 0.34 }));
        let (g, _) = analyze_feature(&f, &quick_cfg()).unwrap();
        match g.kind {
            GlyphKind::Jitter { points } => {
                let mut stacks: Vec<f64> = points.iter().map(|p| p.value).collect();
                stacks.dedup();
                assert_eq!(stacks, vec![0.12, 0.34]);
            }
            other => panic!("expected jitter, got {}", other.name()),
        }
    }

    #[test]
    fn constant_is_dirac() {
        let f = FeatureSeries::new("c", std::iter::repeat_n(3.5, 500));
        let (g, a) = analyze_feature(&f, &EngineConfig { boxplot_overlay: true, ..quick_cfg() }).unwrap();
        assert_eq!(g.kind, GlyphKind::DiracLine { value: 3.5 });
        assert!(g.gaussian_overlay.is_none());
        assert_eq!(a.glyph_kind, "dirac_line");
        assert_eq!(a.stats.skewness_g1, None);
    }

    #[test]
    fn box_overlay_is_ordered() {
        let mut v: Vec<f64> = (0..100).map(f64::from).collect();
        v.push(1000.0);
        let b = box_overlay(&crate::stats::sorted(&v)).unwrap();
        assert!(b.whisker_low <= b.q25 && b.q25 <= b.median && b.median <= b.q75 && b.q75 <= b.whisker_high);
        assert_eq!(b.whisker_high, 99.0);
        assert_eq!(b.whisker_low, 0.0);
    }

    fn analysis(name: &str, dip_p: Option<f64>, z: f64, discrete: bool) -> FeatureAnalysis {
        let stats = describe(&FeatureSeries::new(name, [1.0, 2.0])).unwrap();
        FeatureAnalysis {
            name: name.into(),
            stats,
            report: dip_p.map(|p| TestReport {
                n: 2,
                dip_d: 0.1,
                dip_p: p,
                dip_replicates: 10,
                skew_g1: z,
                skew_z: z,
                skew_p: 0.5,
                seed: 0,
            }),
            shape_class: if discrete { ShapeClass::Discrete } else { ShapeClass::GaussianLike },
            radius: None,
            glyph_kind: String::new(),
            diagnostics: vec![],
        }
    }

    #[test]
    fn ordering_modes() {
        let a = vec![
            analysis("b", Some(0.2), 0.0, false),
            analysis("a", None, 0.0, true),
            analysis("c", Some(0.9), 3.0, false),
            analysis("d", Some(0.9), -1.0, false),
        ];
        assert_eq!(order_features(&a, FeatureOrdering::Columnwise), vec![0, 1, 2, 3]);
        assert_eq!(order_features(&a, FeatureOrdering::Alphabetical), vec![1, 0, 2, 3]);
        assert_eq!(order_features(&a, FeatureOrdering::Statistics), vec![3, 2, 0, 1]);
        assert_eq!(order_features(&a, FeatureOrdering::Default), vec![3, 2, 0, 1]);
    }

    #[test]
    fn ordering_round_trip() {
        for m in FeatureOrdering::ALL {
            assert_eq!(m.to_string().parse::<FeatureOrdering>().unwrap(), m);
        }
        assert!("random".parse::<FeatureOrdering>().is_err());
    }

    #[test]
    fn empty_feature_is_skipped() {
        let good = FeatureSeries::new("good", (0..30).map(f64::from));
        let empty = FeatureSeries::from_cells("empty", [None, None]);
        let m = build_plot_model(&[good, empty], &quick_cfg()).unwrap();
        assert_eq!(m.glyphs.len(), 1);
        assert_eq!(m.skipped.len(), 1);
        assert_eq!(m.skipped[0].feature, "empty");
        let none = build_plot_model(&[FeatureSeries::from_cells("e", [None])], &quick_cfg());
        assert_eq!(none, Err(Error::NoPlottableFeatures));
    }

    #[test]
    fn y_range_padding() {
        let f = crate::generators::sample_uniform(1000, -2.0, 2.0, 1).unwrap();
        let m = build_plot_model(std::slice::from_ref(&f), &quick_cfg()).unwrap();
        let (lo, hi) = m.y_range;
        let (dmin, dmax) = crate::stats::min_max(f.values());
        assert!(lo <= -2.0 && hi >= 2.0);
        assert!((dmin - lo) + (hi - dmax) <= 0.02 * (dmax - dmin) + 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(EngineConfig { min_data: 1, ..EngineConfig::default() }.validate().is_err());
        assert!(EngineConfig { min_unique: 0, ..EngineConfig::default() }.validate().is_err());
        assert!(EngineConfig { sample_size_cap: 10, ..EngineConfig::default() }.validate().is_err());
        assert!(EngineConfig { alpha: 1.5, ..EngineConfig::default() }.validate().is_err());
        assert!(EngineConfig::default().validate().is_ok());
    }
}
