//! Command-line front end.
//!
//! Exit codes: 0 success, 2 unreadable input or bad parameters,
//! 3 no feature could be plotted.

pub mod bench;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::engine::{build_plot_model, EngineConfig, FeatureOrdering};
use crate::error::Error;
use crate::generators::{sample_gauss_mixture, sample_skew_normal, sample_uniform, GaussMixSpec, SkewSpec};
use crate::hypothesis::{dagostino_skewness, DipNull, DEFAULT_REPLICATES};
use crate::ingest::parse_csv;
use crate::render::{render_svg, RenderConfig};
use crate::rng;
use crate::stats::{FeatureSeries, ScalingMode};
use bench::{rows_csv, run_bench, summary_csv, BenchSpec, Experiment};
use report::{PlotReport, RunManifest, TOOL, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOTHING_PLOTTED: i32 = 3;
pub const SEED_ENV: &str = "FINESTRUCT_SEED";

#[derive(Debug, Parser)]
#[command(name = "finestruct", version, about = "Mirrored-density plots, dip and skewness tests for univariate features")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render every column of a CSV file as a mirrored-density plot.
    Plot(PlotArgs),
    /// Run the dip and skewness tests on one column.
    Test(TestArgs),
    /// Write a synthetic sample as a one-column CSV.
    Gen(GenArgs),
    /// Monte Carlo sweep of test p-values over a generator parameter.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Random seed [env: FINESTRUCT_SEED, default 0]
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    pub input: PathBuf,
    /// SVG output path [default: <input>.svg]
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// JSON report path [default: <input>.report.json]
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Run manifest path [default: <input>.manifest.json]
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long, default_value = "none", value_parser = parse_scaling)]
    pub scaling: ScalingMode,
    #[arg(long, default_value = "default", value_parser = parse_ordering)]
    pub ordering: FeatureOrdering,
    /// Total number of cells kept across all features.
    #[arg(long, default_value_t = 500_000)]
    pub sample_size: usize,
    #[arg(long, default_value_t = 50)]
    pub min_data: usize,
    #[arg(long, default_value_t = 12)]
    pub min_unique: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Never overlay the robustly estimated Gaussian.
    #[arg(long)]
    pub no_gaussian: bool,
    /// Overlay a box plot on every column.
    #[arg(long)]
    pub boxplot: bool,
    /// Horizontal reference line at this value (repeatable).
    #[arg(long = "hline", allow_negative_numbers = true)]
    pub hlines: Vec<f64>,
    #[arg(long, default_value = "")]
    pub title: String,
    #[arg(long, default_value_t = 960)]
    pub width: u32,
    #[arg(long, default_value_t = 600)]
    pub height: u32,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    pub input: PathBuf,
    pub column: String,
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
    /// Sample size
    #[arg(short = 'n', long, global = true, default_value_t = 1000)]
    pub n: usize,
    /// Random seed [env: FINESTRUCT_SEED, default 0]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// CSV output path [default: stdout]
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Header of the generated column [default: generator name]
    #[arg(long, global = true)]
    pub column: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Uniform on [low, high).
    Uniform {
        #[arg(allow_negative_numbers = true)]
        low: f64,
        #[arg(allow_negative_numbers = true)]
        high: f64,
    },
    /// Gaussian mixture given as mean:sd:weight triples, e.g. "0:1:0.5,2.5:1:0.5".
    Gaussmix { spec: String },
    /// Fernandez-Steel skewed normal with skew parameter xi.
    Skewnorm {
        xi: f64,
        /// Do not standardize to mean 0 and variance 1.
        #[arg(long)]
        raw: bool,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(value_parser = parse_experiment)]
    pub experiment: Experiment,
    /// Comma-separated parameter values (means for bimodal, xi for skew).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub sweep: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub iterations: usize,
    /// Sample size [default: 31000 bimodal, 15000 skew]
    #[arg(short = 'n', long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Per-iteration results CSV [default: stdout]
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Median and 99th percentile per sweep value [default: stderr]
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

fn parse_scaling(s: &str) -> Result<ScalingMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_ordering(s: &str) -> Result<FeatureOrdering, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_experiment(s: &str) -> Result<Experiment, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoPlottableFeatures => Self {
                code: EXIT_NOTHING_PLOTTED,
                message: e.to_string(),
            },
            e => Self::input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<(u64, &'static str), Failure> {
    if let Some(s) = flag {
        return Ok((s, "flag"));
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|s| (s, "env"))
            .map_err(|_| Failure::input(format!("{SEED_ENV}='{v}' is not an unsigned integer"))),
        Err(_) => Ok((0, "default")),
    }
}

fn sibling(input: &Path, suffix: &str) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "plot".into());
    input.with_file_name(format!("{stem}{suffix}"))
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn cmd_plot(args: &PlotArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let started = Instant::now();
    let (seed, seed_source) = resolve_seed(args.seed.seed)?;
    let table = parse_csv(&read_input(&args.input)?)
        .map_err(|e| Failure::input(format!("{}: {e}", args.input.display())))?;

    let engine = EngineConfig {
        sample_size_cap: args.sample_size,
        min_data: args.min_data,
        min_unique: args.min_unique,
        alpha: args.alpha,
        replicates: args.replicates,
        scaling: args.scaling,
        ordering: args.ordering,
        robust_gaussian: !args.no_gaussian,
        boxplot_overlay: args.boxplot,
        seed,
        ..EngineConfig::default()
    };
    let render = RenderConfig {
        width_px: args.width,
        height_px: args.height,
        reference_lines: args.hlines.clone(),
        ..RenderConfig::default()
    };
    render.validate()?;
    engine.validate()?;

    let svg_path = args.output.clone().unwrap_or_else(|| sibling(&args.input, ".svg"));
    let report_path = args.report.clone().unwrap_or_else(|| sibling(&args.input, ".report.json"));
    let manifest_path = args.manifest.clone().unwrap_or_else(|| sibling(&args.input, ".manifest.json"));

    let mut manifest = RunManifest {
        schema_version: crate::engine::SCHEMA_VERSION,
        tool: TOOL,
        version: VERSION,
        command: "plot",
        input: Some(args.input.display().to_string()),
        seed,
        seed_source,
        rng: rng::RNG_ALGORITHM,
        engine: Some(&engine),
        render: Some(&render),
        columns: table.diagnostics(),
        skipped: Vec::new(),
        outputs: Vec::new(),
        elapsed_ms: 0,
    };

    let result = build_plot_model(&table.features, &engine);
    let mut model = match result {
        Ok(m) => m,
        Err(e) => {
            if e == Error::NoPlottableFeatures {
                manifest.skipped = table
                    .features
                    .iter()
                    .map(|f| crate::engine::SkipDiagnostic {
                        feature: f.name.clone(),
                        reason: "no plottable values".into(),
                    })
                    .collect();
                manifest.elapsed_ms = started.elapsed().as_millis();
                write_file(&manifest_path, &to_json(&manifest))?;
            }
            return Err(e.into());
        }
    };
    model.title = args.title.clone();
    let svg = render_svg(&model, &render)?;
    let report = PlotReport::new(&model, &engine);

    write_file(&svg_path, &svg)?;
    write_file(&report_path, &to_json(&report))?;
    manifest.skipped = model.skipped.clone();
    manifest.outputs = vec![
        svg_path.display().to_string(),
        report_path.display().to_string(),
        manifest_path.display().to_string(),
    ];
    manifest.elapsed_ms = started.elapsed().as_millis();
    write_file(&manifest_path, &to_json(&manifest))?;

    writeln!(
        out,
        "plotted {} feature(s), skipped {}: {}",
        model.glyphs.len(),
        model.skipped.len(),
        svg_path.display()
    )?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnTest {
    pub column: String,
    pub n: usize,
    pub missing: usize,
    pub dip_d: Option<f64>,
    pub dip_p: Option<f64>,
    pub replicates: usize,
    pub skew_g1: Option<f64>,
    pub skew_z: Option<f64>,
    pub skew_p: Option<f64>,
    pub seed: u64,
    pub diagnostics: Vec<String>,
}

/// Both tests on one feature. Undefined results are `None` with a diagnostic.
pub fn test_column(f: &FeatureSeries, replicates: usize, seed: u64) -> Result<ColumnTest, Error> {
    let mut t = ColumnTest {
        column: f.name.clone(),
        n: f.len(),
        missing: f.missing_count,
        dip_d: None,
        dip_p: None,
        replicates,
        skew_g1: None,
        skew_z: None,
        skew_p: None,
        seed,
        diagnostics: Vec::new(),
    };
    if f.unique_count() <= 1 {
        t.diagnostics.push(if f.is_empty() { Error::EmptyFeature } else { Error::ConstantFeature }.to_string());
        return Ok(t);
    }
    let null = DipNull::simulate(f.len(), replicates, seed)?;
    let d = crate::dip::dip_statistic(f.values())?;
    t.dip_d = Some(d);
    t.dip_p = Some(null.p_value(d));
    match dagostino_skewness(f.values()) {
        Ok(s) => {
            t.skew_g1 = Some(s.g1);
            t.skew_z = Some(s.z);
            t.skew_p = Some(s.p);
        }
        Err(e) => t.diagnostics.push(format!("skewness test: {e}")),
    }
    Ok(t)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x}"))
}

fn cmd_test(args: &TestArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (seed, _) = resolve_seed(args.seed.seed)?;
    if args.replicates == 0 {
        return Err(Failure::input("replicates must be positive"));
    }
    let table = parse_csv(&read_input(&args.input)?)
        .map_err(|e| Failure::input(format!("{}: {e}", args.input.display())))?;
    let f = table
        .column(&args.column)
        .ok_or_else(|| Failure::input(format!("no column named '{}'", args.column)))?;
    let t = test_column(f, args.replicates, seed)?;
    if args.json {
        write!(out, "{}", to_json(&t))?;
    } else {
        writeln!(out, "column: {}", t.column)?;
        writeln!(out, "n: {} (missing {})", t.n, t.missing)?;
        writeln!(out, "dip D: {}", fmt_opt(t.dip_d))?;
        writeln!(out, "dip p: {} (B = {}, seed = {})", fmt_opt(t.dip_p), t.replicates, t.seed)?;
        writeln!(out, "skewness g1: {}", fmt_opt(t.skew_g1))?;
        writeln!(out, "skewness z: {}", fmt_opt(t.skew_z))?;
        writeln!(out, "skewness p: {}", fmt_opt(t.skew_p))?;
        for d in &t.diagnostics {
            writeln!(out, "note: {d}")?;
        }
    }
    Ok(())
}

fn column_csv(header: &str, values: &[f64]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([header]).expect("in-memory write");
    for v in values {
        w.write_record([v.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (seed, _) = resolve_seed(args.seed)?;
    if args.n == 0 {
        return Err(Failure::input("n must be positive"));
    }
    let f = match &args.kind {
        GenKind::Uniform { low, high } => sample_uniform(args.n, *low, *high, seed)?,
        GenKind::Gaussmix { spec } => sample_gauss_mixture(args.n, &spec.parse::<GaussMixSpec>()?, seed),
        GenKind::Skewnorm { xi, raw } => {
            let spec = SkewSpec {
                standardized: !raw,
                ..SkewSpec::new(*xi)?
            };
            sample_skew_normal(args.n, &spec, seed)
        }
    };
    let header = args.column.clone().unwrap_or_else(|| f.name.clone());
    let csv = column_csv(&header, f.values());
    match &args.output {
        Some(p) => write_file(p, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let (seed, _) = resolve_seed(args.seed.seed)?;
    let spec = BenchSpec {
        experiment: args.experiment,
        sweep: args.sweep.clone(),
        iterations: args.iterations,
        n: args.n.unwrap_or(args.experiment.default_n()),
        replicates: args.replicates,
        seed,
    };
    let results = run_bench(&spec)?;
    let rows = rows_csv(&results);
    match &args.output {
        Some(p) => write_file(p, &rows)?,
        None => out.write_all(rows.as_bytes())?,
    }
    let summary = summary_csv(&results);
    match &args.summary {
        Some(p) => write_file(p, &summary)?,
        None => err.write_all(summary.as_bytes())?,
    }
    Ok(())
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Plot(a) => cmd_plot(a, out),
        Command::Test(a) => cmd_test(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Bench(a) => cmd_bench(a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
