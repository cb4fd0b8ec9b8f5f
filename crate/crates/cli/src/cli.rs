use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "spiral-dims", version, about = "Dimensions of elliptical polynomial spirals")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Closed-form intermediate dimensions across a θ grid (CSV).
    Dims(DimsArgs),
    /// Closed-form Assouad spectrum across a θ grid (CSV).
    Spectrum(SpectrumArgs),
    /// Box-dimension estimate from grid counts.
    EstimateBox(EstimateBoxArgs),
    /// Assouad-spectrum estimate from localized grid counts.
    EstimateAssouad(EstimateAssouadArgs),
    /// Intermediate-dimension estimate from two-scale covers.
    EstimateIntermediate(EstimateIntermediateArgs),
    /// Mass-distribution check along a scale ladder.
    MassCheck(MassCheckArgs),
    /// Hölder exponent bounds for one pair, or a grid sweep (CSV).
    Holder(HolderArgs),
    /// Box counts of fractional Brownian images of the spiral.
    Fbm(FbmArgs),
    /// SVG of the spiral or of the concentric ellipse family.
    Render(RenderArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dims(_) => "dims",
            Command::Spectrum(_) => "spectrum",
            Command::EstimateBox(_) => "estimate-box",
            Command::EstimateAssouad(_) => "estimate-assouad",
            Command::EstimateIntermediate(_) => "estimate-intermediate",
            Command::MassCheck(_) => "mass-check",
            Command::Holder(_) => "holder",
            Command::Fbm(_) => "fbm",
            Command::Render(_) => "render",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SpiralArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; defaults to `$SPIRAL_DIMS_OUT_DIR/<command>.<ext>` when
    /// that variable is set, otherwise stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the run manifest; defaults to `<out>.manifest.json`,
    /// or stderr when writing to stdout.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
pub struct SamplingArgs {
    /// Maximum chord as a fraction of the grid side, at most 0.5.
    #[arg(long, default_value_t = 0.5)]
    pub chord_fraction: f64,
    /// Sampled turns reach this multiple of the vertical separation index.
    #[arg(long, default_value_t = 2.0)]
    pub tail_factor: f64,
    /// Grid anchor offset in units of the grid side.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub anchor_x: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub anchor_y: f64,
    #[arg(long, default_value_t = 100_000_000)]
    pub point_budget: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct DimsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spiral: SpiralArgs,
    /// `start:stop:step`, both ends included.
    #[arg(long, default_value = "0:1:0.01")]
    pub theta_grid: String,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spiral: SpiralArgs,
    /// `start:stop:step`; values at or above 1 are dropped.
    #[arg(long, default_value = "0:1:0.01")]
    pub theta_grid: String,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateBoxArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spiral: SpiralArgs,
    /// Smallest scale; accepts `2^-15` notation.
    #[arg(long, default_value = "2^-15")]
    pub delta_min: String,
    #[arg(long, default_value = "2^-7")]
    pub delta_max: String,
    #[arg(long, default_value_t = 9)]
    pub levels: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowArg {
    Auto,
    Square,
    Ball,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateAssouadArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spiral: SpiralArgs,
    #[arg(long)]
    pub theta: f64,
    #[arg(long, default_value = "2^-16")]
    pub delta_min: String,
    #[arg(long, default_value = "2^-8")]
    pub delta_max: String,
    #[arg(long, default_value_t = 9)]
    pub levels: usize,
    #[arg(long, value_enum, default_value_t = WindowArg::Auto)]
    pub window: WindowArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimateIntermediateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spiral: SpiralArgs,
    #[arg(long)]
    pub theta: f64,
    #[arg(long, default_value = "2^-30")]
    pub delta_min: String,
    #[arg(long, default_value = "2^-8")]
    pub delta_max: String,
    #[arg(long, default_value_t = 12)]
    pub levels: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct MassCheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spiral: SpiralArgs,
    #[arg(long)]
    pub theta: f64,
    /// Comma-separated scales.
    #[arg(long, default_value = "2^-12,2^-16,2^-20")]
    pub deltas: String,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct HolderArgs {
    #[arg(long, required_unless_present = "sweep")]
    pub p: Option<f64>,
    #[arg(long, required_unless_present = "sweep")]
    pub q: Option<f64>,
    #[arg(long, required_unless_present = "sweep")]
    pub r: Option<f64>,
    #[arg(long, required_unless_present = "sweep")]
    pub s: Option<f64>,
    /// Sweep p, q, r, s over a grid instead (CSV).
    #[arg(long)]
    pub sweep: bool,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct FbmArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spiral: SpiralArgs,
    #[arg(long)]
    pub alpha: f64,
    /// Number of seeds, starting at `--seed`.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3000)]
    pub sites: usize,
    /// Turns to sample; chosen from the site count when omitted.
    #[arg(long)]
    pub turns: Option<u64>,
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
    /// Also write the image cloud of the first seed as CSV `x,y`.
    #[arg(long)]
    pub cloud: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Spiral,
    Ellipses,
}

#[derive(Debug, Args, Serialize)]
pub struct RenderArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spiral: SpiralArgs,
    #[arg(long, value_enum, default_value_t = Family::Spiral)]
    pub family: Family,
    /// Number of turns (or ellipses) drawn.
    #[arg(long, default_value_t = 60)]
    pub turns: u64,
    /// Image width in pixels.
    #[arg(long, default_value_t = 800)]
    pub size: u32,
    #[arg(long, default_value_t = 1.0)]
    pub stroke_width: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}
