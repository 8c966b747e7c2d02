//! `motion-graph`: build motion graphs, retrieve and stitch walks, sample
//! query motions and score results from the command line.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::PipelineConfig;

/// Failure reported as one `error: <code>: <message>` line on standard error.
#[derive(Debug)]
pub struct CliError {
    code: &'static str,
    message: String,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line = self.message.split_whitespace().collect::<Vec<_>>().join(" ");
        write!(f, "error: {}: {one_line}", self.code)
    }
}

impl From<motion_graph::Error> for CliError {
    fn from(e: motion_graph::Error) -> Self {
        Self::new(e.code(), e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "motion-graph", version, about, after_help = config::keys_help())]
struct Cli {
    /// Flat TOML file of configuration keys (listed below).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads [config: workers, default 1]. Results do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// More log output on standard error (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a motion graph from a motion document.
    BuildGraph(BuildGraphArgs),
    /// Find the graph walk that best matches a query motion.
    Retrieve(RetrieveArgs),
    /// Generate a query motion from conditioning features with the DDIM sampler.
    Sample(SampleArgs),
    /// Turn a retrieved path into a motion track and a render plan.
    Stitch(StitchArgs),
    /// Score a motion: beat consistency and diversity.
    Metrics(MetricsArgs),
    /// Print graph statistics.
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
pub struct BuildGraphArgs {
    /// Input motion document (.json).
    #[arg(long, value_name = "FILE")]
    pub motion: PathBuf,
    /// Output graph; `.mgb` writes the binary container, anything else JSON.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    /// Positional threshold multiplier [config: lambda_p, default 1.3].
    #[arg(long)]
    pub lambda_p: Option<f64>,
    /// Velocity threshold multiplier [config: lambda_v, default 1.3].
    #[arg(long)]
    pub lambda_v: Option<f64>,
    /// Fraction of joints that must pass both thresholds [config: th, default 0.95].
    #[arg(long)]
    pub th: Option<f64>,
    /// Test every joint of every candidate pair [config: prefilter = false].
    #[arg(long)]
    pub no_prefilter: bool,
    /// Keep every component instead of pruning to the largest SCC [config: keep_all_sccs].
    #[arg(long)]
    pub keep_all_sccs: bool,
}

#[derive(Debug, Args)]
pub struct RetrieveArgs {
    /// Motion graph (.json or .mgb).
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Query motion document.
    #[arg(long, value_name = "FILE")]
    pub query: PathBuf,
    /// Clip of the query document to match; defaults to the first clip.
    #[arg(long, value_name = "ID")]
    pub clip: Option<String>,
    /// Output path file.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    /// Beam width K [config: beam, default 200].
    #[arg(long)]
    pub beam: Option<usize>,
    /// Cost-gap slack gamma [config: gamma, default 1.5]; `inf` disables it.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Penalty per transition edge [config: beta, default 0.1].
    #[arg(long)]
    pub beta: Option<f64>,
    /// Rotation-term weight [config: lambda_r, default 1.0].
    #[arg(long)]
    pub lambda_r: Option<f64>,
    /// Position-term weight [config: lambda_p_metric, default 1.0].
    #[arg(long)]
    pub lambda_p: Option<f64>,
    /// Compare world positions instead of root-relative ones.
    #[arg(long)]
    pub absolute_positions: bool,
    /// Divide the position term by the mean upper-body bone length
    /// [config: normalize_positions, default false].
    #[arg(long)]
    pub normalize_positions: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Conditioning feature document.
    #[arg(long, value_name = "FILE")]
    pub features: PathBuf,
    /// Reference denoiser model file.
    #[arg(long, value_name = "FILE")]
    pub denoiser: PathBuf,
    /// Noise-schedule TOML file (train_steps, beta_start, beta_end,
    /// sampling_steps); defaults to 1000 linear steps from 1e-4 to 0.02.
    #[arg(long, value_name = "FILE")]
    pub schedule: Option<PathBuf>,
    /// Output motion document.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    /// Noise seed [config: seed, default 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Frames per window [config: clip_len, default 90].
    #[arg(long)]
    pub clip_len: Option<usize>,
    /// Frames shared by consecutive windows [config: overlap, default 6].
    #[arg(long)]
    pub overlap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StitchArgs {
    /// Motion graph the path was retrieved from.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Path file written by `retrieve`.
    #[arg(long, value_name = "FILE")]
    pub path: PathBuf,
    /// Output motion document with the stitched track.
    #[arg(long, value_name = "FILE")]
    pub out_motion: PathBuf,
    /// Output render plan.
    #[arg(long, value_name = "FILE")]
    pub out_plan: PathBuf,
    /// Replace the frames next to each transition, keeping one frame per path
    /// node [config: preserve_length, default true].
    #[arg(long, conflicts_with = "insert_frames")]
    pub preserve_length: bool,
    /// Insert two frames per transition instead [config: preserve_length = false].
    #[arg(long)]
    pub insert_frames: bool,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Motion document to score.
    #[arg(long, value_name = "FILE")]
    pub motion: PathBuf,
    /// Clip to score; defaults to the first clip.
    #[arg(long, value_name = "ID")]
    pub clip: Option<String>,
    /// Audio beat file: one onset time in seconds per line.
    #[arg(long, value_name = "FILE")]
    pub beats: Option<PathBuf>,
    /// Beat-consistency kernel width in seconds [config: sigma, default 0.1].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Minimum kinematic-beat prominence in m/s [config: prominence, default 0.05].
    #[arg(long)]
    pub prominence: Option<f64>,
    /// Glob of motion documents whose clips form the diversity set.
    #[arg(long, value_name = "GLOB")]
    pub diversity_set: Option<String>,
    /// Output report (JSON).
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    /// Motion graph (.json or .mgb).
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Also write the statistics as JSON.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn load_config(cli: &Cli) -> Result<PipelineConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = load_config(&cli)?;
    match &cli.command {
        Command::BuildGraph(a) => commands::build_graph(a, &mut cfg),
        Command::Retrieve(a) => commands::retrieve(a, &mut cfg),
        Command::Sample(a) => commands::sample(a, &mut cfg),
        Command::Stitch(a) => commands::stitch(a, &mut cfg),
        Command::Metrics(a) => commands::metrics(a, &mut cfg),
        Command::Inspect(a) => commands::inspect(a, &mut cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
