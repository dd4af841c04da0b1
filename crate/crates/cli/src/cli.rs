//! The `bregman` command line: `sim`, `bench` and `synth`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use bregman_core::synth::{self, Shape, SyntheticSpec};
use bregman_core::{
    ConvexCost, EvaluationReport, LabeledDataset, Measure, SubgradientRule, TvOptions,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::data::{self, ColumnRef, CsvSchema, DataError};
use crate::eval;

/// Directory used for reports when `--output` is not given.
pub const OUTPUT_DIR_ENV: &str = "BREGMAN_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

/// Every measure name accepted by `--measure`.
pub const MEASURE_NAMES: &[&str] = &[
    "cosine",
    "euclidean",
    "bregman-angle-entropy",
    "bregman-angle-modentropy",
    "bregman-angle-tv",
    "bregman-angle-l2",
    "tangent-entropy",
    "tangent-modentropy",
    "tangent-tv",
    "tangent-l2",
    "bregman-divergence-entropy",
    "bregman-divergence-modentropy",
    "bregman-divergence-tv",
    "bregman-divergence-l2",
];

#[derive(Debug, Parser)]
#[command(name = "bregman", version, about = "Bregman-angle similarity toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two vectors under one or more measures.
    Sim(SimArgs),
    /// Run a 1-NN evaluation on a CSV dataset.
    Bench(BenchArgs),
    /// Generate circle/line layouts and tabulate measures against the reference.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeasureFlags {
    /// Measure to evaluate; repeat for several.
    #[arg(long = "measure", short = 'm', value_parser = clap::builder::PossibleValuesParser::new(MEASURE_NAMES))]
    pub measures: Vec<String>,
    /// Flip the first TV component to +sign(x2-x1) (not a valid subgradient).
    #[arg(long)]
    pub paper_literal: bool,
    /// Value of sign(0) for the TV subgradient.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub sign_zero: f64,
    /// At TV kinks, pick the subgradient whose normal is closest to the other vector's.
    #[arg(long)]
    pub max_cosine_subgradient: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; defaults to $BREGMAN_OUTPUT_DIR/<command>-report.<ext> or stdout.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Two comma-separated vectors, e.g. `1,0 0,1`.
    #[arg(allow_hyphen_values = true, num_args = 0..=2)]
    pub vectors: Vec<String>,
    /// CSV file (no header) whose first two rows are the vectors.
    #[arg(long, conflicts_with = "vectors")]
    pub file: Option<PathBuf>,
    #[command(flatten)]
    pub measure: MeasureFlags,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolArg {
    Loo,
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Gesture-phase raw files: label `phase`, drop `timestamp`, first two
    /// classes, features ×1e7, leave-one-out.
    Gesture,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Dataset CSV; repeat to concatenate several files.
    #[arg(long = "input", short = 'i', required = true)]
    pub inputs: Vec<PathBuf>,
    /// Test CSV for the split protocol; without it each class is halved.
    #[arg(long = "test-input")]
    pub test_inputs: Vec<PathBuf>,
    #[arg(long)]
    pub preset: Option<Preset>,
    /// Label column (name or zero-based index). Default `label`.
    #[arg(long)]
    pub label_col: Option<String>,
    /// Comma-separated feature columns; default is every other column.
    #[arg(long, value_delimiter = ',')]
    pub feature_cols: Option<Vec<String>>,
    /// Comma-separated columns to ignore.
    #[arg(long, value_delimiter = ',')]
    pub exclude_cols: Option<Vec<String>>,
    #[arg(long)]
    pub no_header: bool,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// Keep only these labels (comma-separated).
    #[arg(long, value_delimiter = ',', conflicts_with = "first_classes")]
    pub keep_classes: Option<Vec<String>>,
    /// Keep the first N labels in order of appearance.
    #[arg(long)]
    pub first_classes: Option<usize>,
    /// Multiply every feature by this factor before evaluation.
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long, value_enum)]
    pub protocol: Option<ProtocolArg>,
    /// Worker threads for the folds.
    #[arg(long, short = 'j', default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub measure: MeasureFlags,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeArg {
    Circle,
    Line,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub shape: ShapeArg,
    #[arg(long, default_value_t = SyntheticSpec::DEFAULT_COUNT)]
    pub count: usize,
    /// Circle centre `x,y`.
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    pub center: Option<Vec<f64>>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// Line direction `x,y`.
    #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
    pub direction: Option<Vec<f64>>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub reference_index: Option<usize>,
    #[command(flatten)]
    pub measure: MeasureFlags,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("{measure}: {source}")]
    Measure {
        measure: String,
        source: bregman_core::Error,
    },
    #[error(transparent)]
    Core(#[from] bregman_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        }
    }
}

fn cost_from(short: &str, flags: &MeasureFlags) -> Option<ConvexCost> {
    Some(match short {
        "entropy" => ConvexCost::NegativeEntropy,
        "modentropy" => ConvexCost::ModifiedEntropy,
        "tv" => ConvexCost::TotalVariation(TvOptions {
            sign_zero: flags.sign_zero,
            paper_literal: flags.paper_literal,
        }),
        "l2" => ConvexCost::SquaredL2,
        _ => return None,
    })
}

/// Resolves a measure name together with the TV flags.
pub fn parse_measure(name: &str, flags: &MeasureFlags) -> Result<Measure, CliError> {
    let unknown = || CliError::Usage(format!("unknown measure `{name}`"));
    let m = match name {
        "cosine" => Measure::Cosine,
        "euclidean" => Measure::Euclidean,
        _ => {
            if let Some(c) = name.strip_prefix("bregman-angle-") {
                Measure::BregmanAngle {
                    cost: cost_from(c, flags).ok_or_else(unknown)?,
                    rule: if flags.max_cosine_subgradient {
                        SubgradientRule::MaxCosine
                    } else {
                        SubgradientRule::Canonical
                    },
                }
            } else if let Some(c) = name.strip_prefix("tangent-") {
                Measure::Tangent {
                    cost: cost_from(c, flags).ok_or_else(unknown)?,
                }
            } else if let Some(c) = name.strip_prefix("bregman-divergence-") {
                Measure::BregmanDivergence {
                    cost: cost_from(c, flags).ok_or_else(unknown)?,
                }
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(m)
}

fn resolve_measures(flags: &MeasureFlags, defaults: &[&str]) -> Result<Vec<Measure>, CliError> {
    if !(-1.0..=1.0).contains(&flags.sign_zero) {
        return Err(CliError::Usage(format!(
            "--sign-zero must lie in [-1, 1], got {}",
            flags.sign_zero
        )));
    }
    let names: Vec<&str> = if flags.measures.is_empty() {
        defaults.to_vec()
    } else {
        flags.measures.iter().map(String::as_str).collect()
    };
    names.iter().map(|n| parse_measure(n, flags)).collect()
}

#[derive(Serialize)]
struct MeasureEcho {
    name: &'static str,
    #[serde(flatten)]
    spec: Measure,
}

fn echo(measures: &[Measure]) -> Vec<MeasureEcho> {
    measures
        .iter()
        .map(|m| MeasureEcho {
            name: m.name(),
            spec: *m,
        })
        .collect()
}

/// Pretty JSON with keys sorted at every level.
fn to_sorted_json(value: &impl Serialize) -> String {
    let v = serde_json::to_value(value).expect("report serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
    s.push('\n');
    s
}

fn parse_vector(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .enumerate()
        .map(|(i, t)| {
            t.trim().parse::<f64>().map_err(|_| {
                CliError::Usage(format!("component {i} of `{text}` is not a number: `{t}`"))
            })
        })
        .collect()
}

fn destination(out: &OutputArgs, command: &str) -> Option<PathBuf> {
    out.output.clone().or_else(|| {
        std::env::var_os(OUTPUT_DIR_ENV).map(|dir| {
            let ext = match out.format {
                Format::Json => "json",
                Format::Csv => "csv",
            };
            Path::new(&dir).join(format!("{command}-report.{ext}"))
        })
    })
}

fn emit(
    out: &OutputArgs,
    command: &str,
    body: &str,
    stdout: &mut dyn Write,
) -> Result<Option<PathBuf>, CliError> {
    match destination(out, command) {
        Some(path) => {
            std::fs::write(&path, body).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Some(path))
        }
        None => {
            stdout
                .write_all(body.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
            Ok(None)
        }
    }
}

// ---------------------------------------------------------------- sim

pub fn cmd_sim(args: &SimArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (x1, x2) = match (&args.file, args.vectors.as_slice()) {
        (Some(path), _) => {
            if !path.exists() {
                return Err(CliError::Usage(format!(
                    "{} does not exist",
                    path.display()
                )));
            }
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let rows: Vec<&str> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .collect();
            if rows.len() < 2 {
                return Err(CliError::Usage(format!(
                    "{} must contain two vectors, one per row",
                    path.display()
                )));
            }
            (parse_vector(rows[0])?, parse_vector(rows[1])?)
        }
        (None, [a, b]) => (parse_vector(a)?, parse_vector(b)?),
        _ => {
            return Err(CliError::Usage(
                "supply two vectors inline or with --file".into(),
            ))
        }
    };
    let measures = resolve_measures(&args.measure, &["cosine"])?;
    let mut values = BTreeMap::new();
    for m in &measures {
        let v = m.compare(&x1, &x2).map_err(|source| CliError::Measure {
            measure: m.name().into(),
            source,
        })?;
        values.insert(m.name(), v.value);
    }
    let body = match args.out.format {
        Format::Json => to_sorted_json(&values),
        Format::Csv => {
            let mut s = String::from("measure,value\n");
            for (k, v) in &values {
                s.push_str(&format!("{k},{v}\n"));
            }
            s
        }
    };
    // Results always go to stdout; a copy is written when a destination exists.
    if destination(&args.out, "sim").is_some() {
        emit(&args.out, "sim", &body, stdout)?;
    }
    stdout
        .write_all(body.as_bytes())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })?;
    Ok(())
}

// ---------------------------------------------------------------- bench

#[derive(Debug, Serialize)]
struct BenchConfig {
    command: &'static str,
    preset: Option<Preset>,
    inputs: Vec<String>,
    test_inputs: Vec<String>,
    schema: CsvSchema,
    class_filter: ClassFilter,
    scale: f64,
    protocol: ProtocolArg,
    nearest_neighbours: usize,
    tie_break: &'static str,
    measures: Vec<MeasureEcho>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
enum ClassFilter {
    All,
    FirstClasses(usize),
    Keep(Vec<String>),
}

impl std::fmt::Debug for MeasureEcho {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name)
    }
}

#[derive(Debug, Serialize)]
struct DatasetSummary {
    name: String,
    instances: usize,
    dimension: usize,
    applied_scale: f64,
    class_counts: BTreeMap<String, usize>,
}

impl DatasetSummary {
    fn of(d: &LabeledDataset) -> Self {
        let mut class_counts = BTreeMap::new();
        for l in d.labels() {
            *class_counts.entry(l.clone()).or_insert(0) += 1;
        }
        DatasetSummary {
            name: d.name().into(),
            instances: d.len(),
            dimension: d.dim(),
            applied_scale: d.applied_scale(),
            class_counts,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    config: BenchConfig,
    dataset: DatasetSummary,
    test_dataset: Option<DatasetSummary>,
    results: Vec<EvaluationReport>,
}

impl BenchReport {
    pub fn results(&self) -> &[EvaluationReport] {
        &self.results
    }
}

fn display_path(p: &Path) -> String {
    p.display().to_string()
}

fn col(s: &str) -> ColumnRef {
    s.parse().expect("infallible")
}

/// Runs the benchmark and returns the report without writing it.
pub fn run_bench(args: &BenchArgs) -> Result<BenchReport, CliError> {
    for p in args.inputs.iter().chain(&args.test_inputs) {
        if !p.exists() {
            return Err(CliError::Usage(format!("{} does not exist", p.display())));
        }
    }
    if !args.delimiter.is_ascii() {
        return Err(CliError::Usage(
            "--delimiter must be a single ASCII character".into(),
        ));
    }
    let gesture = args.preset == Some(Preset::Gesture);
    let schema = CsvSchema {
        label_column: col(args.label_col.as_deref().unwrap_or(if gesture {
            "phase"
        } else {
            "label"
        })),
        feature_columns: args
            .feature_cols
            .as_ref()
            .map(|cols| cols.iter().map(|c| col(c)).collect()),
        exclude_columns: match (&args.exclude_cols, gesture) {
            (Some(cols), _) => cols.iter().map(|c| col(c)).collect(),
            (None, true) => vec![col("timestamp")],
            (None, false) => Vec::new(),
        },
        has_header: !args.no_header,
        delimiter: args.delimiter as u8,
    };
    let class_filter = match (&args.keep_classes, args.first_classes, gesture) {
        (Some(keep), _, _) => ClassFilter::Keep(keep.clone()),
        (None, Some(n), _) => ClassFilter::FirstClasses(n),
        (None, None, true) => ClassFilter::FirstClasses(2),
        (None, None, false) => ClassFilter::All,
    };
    let scale = args.scale.unwrap_or(if gesture { 1e7 } else { 1.0 });
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(CliError::Usage(format!(
            "--scale must be finite and > 0, got {scale}"
        )));
    }
    let protocol = args.protocol.unwrap_or(ProtocolArg::Loo);
    if !args.test_inputs.is_empty() && protocol != ProtocolArg::Split {
        return Err(CliError::Usage(
            "--test-input requires --protocol split".into(),
        ));
    }
    let defaults: &[&str] = if gesture {
        &["cosine", "bregman-angle-entropy", "bregman-angle-tv"]
    } else {
        &["cosine"]
    };
    let measures = resolve_measures(&args.measure, defaults)?;

    let prepare = |paths: &[PathBuf]| -> Result<LabeledDataset, CliError> {
        let raw = data::load_csv_files(paths, &schema)?;
        let filtered = match &class_filter {
            ClassFilter::All => raw,
            ClassFilter::FirstClasses(n) => data::keep_first_classes(&raw, *n)?,
            ClassFilter::Keep(keep) => data::keep_classes(&raw, keep)?,
        };
        Ok(filtered.scale_features(scale)?)
    };

    let dataset = prepare(&args.inputs)?;
    let (train, test) = match protocol {
        ProtocolArg::Loo => (dataset, None),
        ProtocolArg::Split if args.test_inputs.is_empty() => {
            let (tr, te) = bregman_core::split_half_per_class(&dataset)?;
            (tr, Some(te))
        }
        ProtocolArg::Split => (dataset, Some(prepare(&args.test_inputs)?)),
    };

    let mut results = Vec::with_capacity(measures.len());
    for m in &measures {
        let report = match &test {
            None => eval::leave_one_out(&train, m, args.jobs),
            Some(test) => eval::train_test(&train, test, m, args.jobs),
        }
        .map_err(|source| CliError::Measure {
            measure: m.name().into(),
            source,
        })?;
        results.push(report);
    }

    Ok(BenchReport {
        config: BenchConfig {
            command: "bench",
            preset: args.preset,
            inputs: args.inputs.iter().map(|p| display_path(p)).collect(),
            test_inputs: args.test_inputs.iter().map(|p| display_path(p)).collect(),
            schema,
            class_filter,
            scale,
            protocol,
            nearest_neighbours: 1,
            tie_break: "lowest-index",
            measures: echo(&measures),
        },
        dataset: DatasetSummary::of(&train),
        test_dataset: test.as_ref().map(DatasetSummary::of),
        results,
    })
}

pub fn render_bench(report: &BenchReport, format: Format) -> String {
    match format {
        Format::Json => to_sorted_json(report),
        Format::Csv => {
            let mut s = String::new();
            let config =
                serde_json::to_string(&serde_json::to_value(&report.config).unwrap()).unwrap();
            s.push_str(&format!("# config={config}\n"));
            for r in &report.results {
                s.push_str(&format!(
                    "# {} accuracy={} ({}/{})\n",
                    r.measure_name, r.accuracy, r.correct, r.total
                ));
            }
            s.push_str("measure,protocol,applied_scale,index,predicted,actual,correct\n");
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &report.results {
                let protocol = match r.protocol {
                    bregman_core::Protocol::LeaveOneOut => "leave-one-out",
                    bregman_core::Protocol::TrainTestSplit => "train-test-split",
                };
                for p in &r.per_instance {
                    w.write_record([
                        r.measure_name.as_str(),
                        protocol,
                        &r.applied_scale.to_string(),
                        &p.index.to_string(),
                        &p.predicted,
                        &p.actual,
                        if p.is_correct() { "1" } else { "0" },
                    ])
                    .expect("in-memory csv");
                }
            }
            s.push_str(&String::from_utf8(w.into_inner().expect("in-memory csv")).unwrap());
            s
        }
    }
}

pub fn cmd_bench(
    args: &BenchArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let report = run_bench(args)?;
    let body = render_bench(&report, args.out.format);
    if let Some(path) = emit(&args.out, "bench", &body, stdout)? {
        for r in &report.results {
            let _ = writeln!(
                stderr,
                "{}: {:.2}% ({}/{})",
                r.measure_name,
                100.0 * r.accuracy,
                r.correct,
                r.total
            );
        }
        let _ = writeln!(stderr, "report written to {}", path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------- synth

#[derive(Serialize)]
struct SynthConfig {
    command: &'static str,
    spec: SyntheticSpec,
    measures: Vec<MeasureEcho>,
}

#[derive(Serialize)]
struct SynthRow {
    index: usize,
    x: f64,
    y: f64,
    measures: BTreeMap<&'static str, f64>,
}

#[derive(Serialize)]
struct SynthReport {
    config: SynthConfig,
    reference: [f64; 2],
    rows: Vec<SynthRow>,
}

fn synth_spec(args: &SynthArgs) -> Result<SyntheticSpec, CliError> {
    let pair = |v: &Option<Vec<f64>>, default: [f64; 2]| match v {
        Some(v) if v.len() == 2 => Ok([v[0], v[1]]),
        Some(_) => Err(CliError::Usage(
            "expected two comma-separated numbers".into(),
        )),
        None => Ok(default),
    };
    let shape = match args.shape {
        ShapeArg::Circle => {
            if args.direction.is_some() || args.step.is_some() {
                return Err(CliError::Usage(
                    "--direction/--step apply to --shape line".into(),
                ));
            }
            let Shape::Circle { center, radius } = Shape::default_circle() else {
                unreachable!()
            };
            Shape::Circle {
                center: pair(&args.center, center)?,
                radius: args.radius.unwrap_or(radius),
            }
        }
        ShapeArg::Line => {
            if args.center.is_some() || args.radius.is_some() {
                return Err(CliError::Usage(
                    "--center/--radius apply to --shape circle".into(),
                ));
            }
            let Shape::Line { direction, step } = Shape::default_line() else {
                unreachable!()
            };
            Shape::Line {
                direction: pair(&args.direction, direction)?,
                step: args.step.unwrap_or(step),
            }
        }
    };
    Ok(SyntheticSpec {
        shape,
        count: args.count,
        reference_index: args.reference_index,
    })
}

/// Builds the synth table without writing it.
pub fn render_synth(args: &SynthArgs) -> Result<String, CliError> {
    let spec = synth_spec(args)?;
    let measures = resolve_measures(
        &args.measure,
        &[
            "euclidean",
            "cosine",
            "bregman-angle-entropy",
            "bregman-angle-tv",
        ],
    )?;
    let set = synth::generate(&spec)?;
    let reference = set.reference_vector().clone();
    let mut rows = Vec::with_capacity(set.count);
    for (index, s) in set.samples().iter().enumerate() {
        let mut values = BTreeMap::new();
        for m in &measures {
            let v = m
                .compare(s, &reference)
                .map_err(|source| CliError::Measure {
                    measure: m.name().into(),
                    source: source.at_sample(index),
                })?;
            values.insert(m.name(), v.value);
        }
        rows.push(SynthRow {
            index,
            x: s[0],
            y: s[1],
            measures: values,
        });
    }
    Ok(match args.out.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["index".to_string(), "x".into(), "y".into()];
            header.extend(measures.iter().map(|m| m.name().to_string()));
            w.write_record(&header).expect("in-memory csv");
            for r in &rows {
                let mut rec = vec![r.index.to_string(), r.x.to_string(), r.y.to_string()];
                rec.extend(measures.iter().map(|m| r.measures[m.name()].to_string()));
                w.write_record(&rec).expect("in-memory csv");
            }
            String::from_utf8(w.into_inner().expect("in-memory csv")).unwrap()
        }
        Format::Json => to_sorted_json(&SynthReport {
            config: SynthConfig {
                command: "synth",
                spec,
                measures: echo(&measures),
            },
            reference: [reference[0], reference[1]],
            rows,
        }),
    })
}

pub fn cmd_synth(
    args: &SynthArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let body = render_synth(args)?;
    if let Some(path) = emit(&args.out, "synth", &body, stdout)? {
        let _ = writeln!(stderr, "plot data written to {}", path.display());
    }
    Ok(())
}

trait AtSample {
    fn at_sample(self, index: usize) -> bregman_core::Error;
}

impl AtSample for bregman_core::Error {
    fn at_sample(self, index: usize) -> bregman_core::Error {
        bregman_core::Error::Instance {
            index,
            source: Box::new(self),
        }
    }
}

// ---------------------------------------------------------------- entry

/// Parses `args` and runs the chosen command, returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match &cli.command {
        Command::Sim(a) => cmd_sim(a, stdout),
        Command::Bench(a) => cmd_bench(a, stdout, stderr),
        Command::Synth(a) => cmd_synth(a, stdout, stderr),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
