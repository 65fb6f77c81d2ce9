//! JSON documents written next to the plot.

use serde::Serialize;

use crate::engine::{EngineConfig, FeatureAnalysis, PlotModel, SkipDiagnostic, SCHEMA_VERSION};
use crate::ingest::ColumnDiagnostic;
use crate::render::RenderConfig;
use crate::stats::DescriptiveStats;
use crate::hypothesis::TestReport;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct FeatureReport<'a> {
    pub name: &'a str,
    pub glyph_kind: &'a str,
    pub shape_class: crate::engine::ShapeClass,
    pub radius: Option<f64>,
    pub gaussian_overlay: bool,
    pub stats: &'a DescriptiveStats,
    pub test_report: Option<&'a TestReport>,
    pub diagnostics: &'a [String],
}

#[derive(Debug, Clone, Serialize)]
pub struct PlotReport<'a> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub scaling: crate::stats::ScalingMode,
    pub ordering: crate::engine::FeatureOrdering,
    pub features: Vec<FeatureReport<'a>>,
    pub skipped: &'a [SkipDiagnostic],
}

impl<'a> PlotReport<'a> {
    pub fn new(model: &'a PlotModel, cfg: &EngineConfig) -> Self {
        let features = model
            .glyphs
            .iter()
            .zip(&model.analyses)
            .map(|(g, a): (_, &'a FeatureAnalysis)| FeatureReport {
                name: &a.name,
                glyph_kind: &a.glyph_kind,
                shape_class: a.shape_class,
                radius: a.radius,
                gaussian_overlay: g.gaussian_overlay.is_some(),
                stats: &a.stats,
                test_report: a.report.as_ref(),
                diagnostics: &a.diagnostics,
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            tool: TOOL,
            version: VERSION,
            scaling: cfg.scaling,
            ordering: cfg.ordering,
            features,
            skipped: &model.skipped,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest<'a> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub input: Option<String>,
    pub seed: u64,
    pub seed_source: &'a str,
    pub rng: &'static str,
    pub engine: Option<&'a EngineConfig>,
    pub render: Option<&'a RenderConfig>,
    pub columns: Vec<ColumnDiagnostic>,
    pub skipped: Vec<SkipDiagnostic>,
    pub outputs: Vec<String>,
    pub elapsed_ms: u128,
}
