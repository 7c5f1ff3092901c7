//! Command-line pipeline: `extract`, `evaluate` and `inspect`.
//!
//! Flags may also come from a TOML file given with `--config`; keys use the
//! flag names (`trim-tol = 0.5`, `method = "dmd-rgb"`), and explicit flags win.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use image::{ImageFormat, Rgb, RgbImage};
use serde::{Deserialize, Serialize};

use crate::dmd::{dmd_on_video, ChannelFit, ColorMode};
use crate::error::{Error, Result};
use crate::metrics::{self, MetricsReport, DEFAULT_TAU};
use crate::qdmd::{qdmd_background, QdmdModel};
use crate::video::{self, FrameSelection, FrameStack};
use crate::Rank;

#[derive(Debug, Parser)]
#[command(
    name = "quatdmd",
    version,
    about = "Quaternion DMD background extraction for color video"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model to a frame sequence and write the background image and report.
    Extract(RunArgs),
    /// Compare a candidate background to ground truth; prints JSON.
    Evaluate(EvaluateArgs),
    /// Fit a model and print its spectrum sorted by |omega|; prints JSON.
    Inspect(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Qdmd,
    DmdGray,
    DmdRgb,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunArgs {
    /// Frame directory or glob pattern.
    #[arg(long)]
    pub input: Option<String>,
    /// Inclusive frame range `A..B`, `A..` or `..B`.
    #[arg(long)]
    pub frames: Option<String>,
    #[arg(long)]
    pub stride: Option<usize>,
    /// Block-average factor.
    #[arg(long)]
    pub downsample: Option<usize>,
    /// Drop leading/trailing frames that differ from their neighbor by at most this.
    #[arg(long)]
    pub trim_tol: Option<f64>,
    /// Number of modes (default: frames − 1, capped at the numerical rank).
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Time step between frames.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Ground-truth background; adds metrics to the report.
    #[arg(long)]
    pub gt: Option<PathBuf>,
    /// pEPs / pCEPs gray-level threshold.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    #[serde(default)]
    pub dump_foreground: bool,
    #[arg(long)]
    #[serde(default)]
    pub dump_spectrum: bool,
    /// Omit timings so identical inputs give byte-identical reports.
    #[arg(long)]
    #[serde(default)]
    pub stable_output: bool,
    /// TOML file with defaults for any of the flags above.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub gt: PathBuf,
    /// Candidate background.
    #[arg(long)]
    pub cb: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TAU)]
    pub tau: f64,
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: String,
    pub frames: Option<String>,
    pub stride: usize,
    pub downsample: usize,
    pub trim_tol: Option<f64>,
    pub rank: Option<usize>,
    pub method: Method,
    pub dt: f64,
    pub out: Option<PathBuf>,
    pub gt: Option<PathBuf>,
    pub tau: f64,
    pub dump_foreground: bool,
    pub dump_spectrum: bool,
    pub stable_output: bool,
}

impl RunConfig {
    /// Merges flags over the optional config file and validates the result.
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str::<RunArgs>(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => RunArgs::default(),
        };
        let input = args
            .input
            .clone()
            .or(file.input)
            .ok_or_else(|| Error::Config("--input is required".into()))?;
        let config = Self {
            input,
            frames: args.frames.clone().or(file.frames),
            stride: args.stride.or(file.stride).unwrap_or(1),
            downsample: args.downsample.or(file.downsample).unwrap_or(1),
            trim_tol: args.trim_tol.or(file.trim_tol),
            rank: args.rank.or(file.rank),
            method: args.method.or(file.method).unwrap_or_default(),
            dt: args.dt.or(file.dt).unwrap_or(1.0),
            out: args.out.clone().or(file.out),
            gt: args.gt.clone().or(file.gt),
            tau: args.tau.or(file.tau).unwrap_or(DEFAULT_TAU),
            dump_foreground: args.dump_foreground || file.dump_foreground,
            dump_spectrum: args.dump_spectrum || file.dump_spectrum,
            stable_output: args.stable_output || file.stable_output,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.rank == Some(0) {
            return Err(Error::Config("--rank must be at least 1".into()));
        }
        if self.downsample == 0 {
            return Err(Error::Config("--downsample must be at least 1".into()));
        }
        if self.stride == 0 {
            return Err(Error::Config("--stride must be at least 1".into()));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!(
                "--dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::Config(format!(
                "--tau must be non-negative, got {}",
                self.tau
            )));
        }
        if self.trim_tol.is_some_and(|t| !(t.is_finite() && t >= 0.0)) {
            return Err(Error::Config("--trim-tol must be non-negative".into()));
        }
        Ok(())
    }

    fn selection(&self) -> Result<FrameSelection> {
        let selection = match &self.frames {
            Some(s) => s.parse()?,
            None => FrameSelection::default(),
        };
        Ok(selection.with_stride(self.stride))
    }

    fn rank(&self) -> Rank {
        self.rank.map_or(Rank::Auto, Rank::Fixed)
    }
}

/// Frames that entered the fit, after selection, trimming and downsampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameWindow {
    pub first_index: usize,
    pub last_index: usize,
    pub count: usize,
    pub first_source: String,
    pub last_source: String,
    pub width: u32,
    pub height: u32,
}

impl FrameWindow {
    fn of(stack: &FrameStack) -> Self {
        let idx = stack.indices();
        let ids = stack.source_ids();
        Self {
            first_index: idx.first().copied().unwrap_or(0),
            last_index: idx.last().copied().unwrap_or(0),
            count: stack.frame_count(),
            first_source: ids.first().cloned().unwrap_or_default(),
            last_source: ids.last().cloned().unwrap_or_default(),
            width: stack.width(),
            height: stack.height(),
        }
    }
}

/// Spectrum summary of one fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    /// `quaternion`, `gray`, `red`, `green` or `blue`.
    pub label: String,
    pub effective_rank: usize,
    pub background_index: usize,
    pub omega_magnitudes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarDiagnostic {
    /// Largest `|scalar part|` dropped when decoding the background.
    pub background_scalar_max: f64,
    /// Frobenius norm of the scalar plane of the reconstruction.
    pub scalar_plane_norm: f64,
    pub reconstruction_norm: f64,
}

/// Wall-clock seconds per stage.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub ingest: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qsvd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigen: Option<f64>,
    /// Whole fit, for the real DMD baselines.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconstruct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub method: Method,
    pub input: String,
    pub frames: FrameWindow,
    pub downsample: usize,
    pub trim_tol: Option<f64>,
    pub dt: f64,
    pub requested_rank: Option<usize>,
    pub models: Vec<ModelReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar_part: Option<ScalarDiagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsReport>,
    /// Files written, relative to the output directory.
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// One row of the spectrum table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub index: usize,
    /// Standard-form eigenvalue `[re, im]`.
    pub eigenvalue: [f64; 2],
    pub omega_magnitude: f64,
    pub amplitude_magnitude: f64,
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub label: String,
    /// Sorted by `omega_magnitude` ascending.
    pub rows: Vec<SpectrumRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub method: Method,
    pub frames: FrameWindow,
    pub tables: Vec<SpectrumTable>,
}

fn sorted_rows(mut rows: Vec<SpectrumRow>) -> Vec<SpectrumRow> {
    rows.sort_by(|a, b| {
        a.omega_magnitude
            .total_cmp(&b.omega_magnitude)
            .then(a.index.cmp(&b.index))
    });
    rows
}

fn qdmd_table(model: &QdmdModel) -> SpectrumTable {
    let p = model.background_index();
    let rows = (0..model.rank)
        .map(|s| {
            let (c, _) = model.eigenvalues[s].parts();
            SpectrumRow {
                index: s,
                eigenvalue: [c.re, c.im],
                omega_magnitude: model.omegas[s].norm(),
                amplitude_magnitude: model.amplitudes[s].norm(),
                selected: s == p,
            }
        })
        .collect();
    SpectrumTable {
        label: "quaternion".into(),
        rows: sorted_rows(rows),
    }
}

fn channel_table(label: &str, fit: &ChannelFit) -> SpectrumTable {
    let rows = (0..fit.rank)
        .map(|s| SpectrumRow {
            index: s,
            eigenvalue: [fit.eigenvalues[s].re, fit.eigenvalues[s].im],
            omega_magnitude: fit.omega_magnitudes[s],
            amplitude_magnitude: fit.amplitude_magnitudes[s],
            selected: s == fit.background_index,
        })
        .collect();
    SpectrumTable {
        label: label.into(),
        rows: sorted_rows(rows),
    }
}

fn channel_labels(method: Method) -> &'static [&'static str] {
    match method {
        Method::Qdmd => &["quaternion"],
        Method::DmdGray => &["gray"],
        Method::DmdRgb => &["red", "green", "blue"],
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn ingest(config: &RunConfig) -> Result<FrameStack> {
    let mut stack = video::load_sequence(&config.input, &config.selection()?)?.with_dt(config.dt);
    if let Some(tol) = config.trim_tol {
        stack = video::trim_static_margins(&stack, tol);
    }
    if config.downsample > 1 {
        stack = video::downsample(&stack, config.downsample)?;
    }
    Ok(stack)
}

/// Everything a fit produces before anything touches the disk.
struct Fitted {
    background: RgbImage,
    foreground: Option<Vec<RgbImage>>,
    tables: Vec<SpectrumTable>,
    scalar_part: Option<ScalarDiagnostic>,
    timings: Timings,
}

fn abs_residual(frame: &RgbImage, background: &RgbImage) -> RgbImage {
    RgbImage::from_fn(frame.width(), frame.height(), |x, y| {
        let (a, b) = (frame.get_pixel(x, y).0, background.get_pixel(x, y).0);
        Rgb([
            a[0].abs_diff(b[0]),
            a[1].abs_diff(b[1]),
            a[2].abs_diff(b[2]),
        ])
    })
}

fn fit(config: &RunConfig, stack: &FrameStack, want_foreground: bool) -> Result<Fitted> {
    let mut timings = Timings::default();
    match config.method {
        Method::Qdmd => {
            let out = qdmd_background(stack, config.rank())?;
            timings.qsvd = Some(secs(out.fit_timings.qsvd));
            timings.eigen = Some(secs(out.fit_timings.eigen));
            let start = Instant::now();
            // |S| per channel; the sign of a foreground residual is not representable in a PNG
            let foreground = want_foreground.then(|| {
                let s = &out.separation.foreground;
                (0..s.cols())
                    .map(|c| {
                        let col: Vec<_> = s
                            .column(c)
                            .iter()
                            .map(|q| crate::Quaternion::pure(q.x.abs(), q.y.abs(), q.z.abs()))
                            .collect();
                        video::decode_column(stack.width(), stack.height(), &col).map(|d| d.image)
                    })
                    .collect::<Result<Vec<_>>>()
            });
            let foreground = foreground.transpose()?;
            timings.reconstruct = Some(secs(out.reconstruct_time + start.elapsed()));
            Ok(Fitted {
                tables: vec![qdmd_table(&out.model)],
                scalar_part: Some(ScalarDiagnostic {
                    background_scalar_max: out.background_scalar_max,
                    scalar_plane_norm: out.scalar_plane_norm,
                    reconstruction_norm: out.reconstruction_norm,
                }),
                background: out.image,
                foreground,
                timings,
            })
        }
        Method::DmdGray | Method::DmdRgb => {
            let mode = if config.method == Method::DmdGray {
                ColorMode::Grayscale
            } else {
                ColorMode::PerChannel
            };
            let start = Instant::now();
            let out = dmd_on_video(stack, mode, config.rank())?;
            timings.fit = Some(secs(start.elapsed()));
            let foreground = want_foreground.then(|| {
                (0..stack.frame_count())
                    .map(|l| abs_residual(&stack.frame(l), &out.image))
                    .collect()
            });
            let tables = channel_labels(config.method)
                .iter()
                .zip(&out.channels)
                .map(|(label, fit)| channel_table(label, fit))
                .collect();
            Ok(Fitted {
                background: out.image,
                foreground,
                tables,
                scalar_part: None,
                timings,
            })
        }
    }
}

fn model_reports(tables: &[SpectrumTable]) -> Vec<ModelReport> {
    tables
        .iter()
        .map(|t| {
            let mut by_index = t.rows.clone();
            by_index.sort_by_key(|r| r.index);
            ModelReport {
                label: t.label.clone(),
                effective_rank: by_index.len(),
                background_index: t.rows.iter().find(|r| r.selected).map_or(0, |r| r.index),
                omega_magnitudes: by_index.iter().map(|r| r.omega_magnitude).collect(),
            }
        })
        .collect()
}

fn output_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Output {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn write_png(dir: &Path, name: &str, img: &RgbImage) -> Result<()> {
    let path = dir.join(name);
    img.save_with_format(&path, ImageFormat::Png)
        .map_err(|e| output_error(&path, e))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value).map_err(|e| output_error(&path, e))?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| output_error(&path, e))
}

/// Load, fit, separate and decode, then write `background.png`,
/// `report.json` and the optional `foreground_####.png` / `spectrum.json`.
///
/// Nothing is written unless every computation stage succeeds.
pub fn cmd_extract(config: &RunConfig) -> Result<RunReport> {
    let out_dir = config
        .out
        .clone()
        .ok_or_else(|| Error::Config("--out is required for extract".into()))?;

    let start = Instant::now();
    let stack = ingest(config)?;
    let mut timings_ingest = secs(start.elapsed());
    let gt = match &config.gt {
        Some(path) => {
            let start = Instant::now();
            let img = video::load_image(path)?;
            let img = if config.downsample > 1 {
                video::downsample_image(&img, config.downsample)?
            } else {
                img
            };
            timings_ingest += secs(start.elapsed());
            Some(img)
        }
        None => None,
    };

    let fitted = fit(config, &stack, config.dump_foreground)?;
    let mut timings = fitted.timings;
    timings.ingest = timings_ingest;

    let metrics = match &gt {
        Some(gt) => {
            let start = Instant::now();
            let report = metrics::evaluate(gt, &fitted.background, config.tau)?;
            timings.metrics = Some(secs(start.elapsed()));
            Some(report)
        }
        None => None,
    };

    fs::create_dir_all(&out_dir).map_err(|e| output_error(&out_dir, e))?;
    let mut outputs = vec!["background.png".to_string()];
    write_png(&out_dir, "background.png", &fitted.background)?;
    if let Some(frames) = &fitted.foreground {
        for (img, idx) in frames.iter().zip(stack.indices()) {
            let name = format!("foreground_{idx:04}.png");
            write_png(&out_dir, &name, img)?;
            outputs.push(name);
        }
    }
    let frames = FrameWindow::of(&stack);
    if config.dump_spectrum {
        let spectrum = SpectrumReport {
            method: config.method,
            frames: frames.clone(),
            tables: fitted.tables.clone(),
        };
        write_json(&out_dir, "spectrum.json", &spectrum)?;
        outputs.push("spectrum.json".into());
    }
    outputs.push("report.json".into());

    let report = RunReport {
        method: config.method,
        input: config.input.clone(),
        frames,
        downsample: config.downsample,
        trim_tol: config.trim_tol,
        dt: config.dt,
        requested_rank: config.rank,
        models: model_reports(&fitted.tables),
        scalar_part: fitted.scalar_part,
        metrics,
        outputs,
        timings: (!config.stable_output).then_some(timings),
    };
    write_json(&out_dir, "report.json", &report)?;
    Ok(report)
}

/// All six metrics of `cb` against `gt`.
pub fn cmd_evaluate(gt: &Path, cb: &Path, tau: f64) -> Result<MetricsReport> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::Config(format!(
            "--tau must be non-negative, got {tau}"
        )));
    }
    let gt = video::load_image(gt)?;
    let cb = video::load_image(cb)?;
    metrics::evaluate(&gt, &cb, tau)
}

/// Fits the model and returns the spectrum table; writes nothing.
pub fn cmd_inspect(config: &RunConfig) -> Result<SpectrumReport> {
    let stack = ingest(config)?;
    let fitted = fit(config, &stack, false)?;
    Ok(SpectrumReport {
        method: config.method,
        frames: FrameWindow::of(&stack),
        tables: fitted.tables,
    })
}

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INGEST: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;
pub const EXIT_METRICS: u8 = 5;
pub const EXIT_OUTPUT: u8 = 6;

/// Process exit code for an error, one per pipeline stage.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) => EXIT_USAGE,
        Error::NoFrames(_)
        | Error::MixedDimensions { .. }
        | Error::Decode { .. }
        | Error::FrameSelection(_)
        | Error::ZeroFactor
        | Error::ColumnLength { .. } => EXIT_INGEST,
        Error::DimensionMismatch { .. } | Error::ImageTooSmall { .. } => EXIT_METRICS,
        Error::Output { .. } => EXIT_OUTPUT,
        Error::ZeroQuaternion { .. }
        | Error::NonPrincipalLog { .. }
        | Error::ShapeMismatch { .. }
        | Error::NotSquare { .. }
        | Error::DataLength { .. }
        | Error::MalformedAdjoint { .. }
        | Error::EigenPairing { .. }
        | Error::NonDiagonalizable { .. }
        | Error::Kernel(_)
        | Error::RankExceeded { .. }
        | Error::InsufficientData { .. }
        | Error::LogSingularity { .. } => EXIT_NUMERICAL,
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| output_error(Path::new("<stdout>"), e))?;
    println!("{text}");
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Extract(args) => RunConfig::resolve(&args).and_then(|c| {
            let report = cmd_extract(&c)?;
            if let Some(dir) = &c.out {
                eprintln!(
                    "wrote {} file(s) to {}",
                    report.outputs.len(),
                    dir.display()
                );
            }
            Ok(())
        }),
        Command::Evaluate(args) => {
            cmd_evaluate(&args.gt, &args.cb, args.tau).and_then(|m| print_json(&m))
        }
        Command::Inspect(args) => RunConfig::resolve(&args)
            .and_then(|c| cmd_inspect(&c))
            .and_then(|s| print_json(&s)),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
