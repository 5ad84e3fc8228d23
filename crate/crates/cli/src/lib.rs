//! Command implementations behind the `nn2poly` binary.

pub mod commands;
pub mod config;
pub mod metrics;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use nn2poly_core::{Activation, Mode};

#[derive(Debug, Parser)]
#[command(name = "nn2poly", version, about = "Extract polynomial representations of MLPs")]
pub struct Cli {
    /// TOML file with default settings; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Directory for persisted partition caches.
    #[arg(long, global = true, env = "NN2POLY_CACHE_DIR", value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a weight file into its polynomial representation.
    Extract(ExtractArgs),
    /// Compare network and polynomial predictions on a dataset.
    Compare(CompareArgs),
    /// List the partitions of a multiset such as "1,1,2,3".
    Partitions(PartitionsArgs),
    /// Generate data, train networks and record polynomial fidelity per seed.
    Simulate(SimulateArgs),
    /// Per-layer potential histograms and Taylor errors.
    Diagnose(DiagnoseArgs),
    /// Term counts and partition-cache sizes over a (p, Q) grid.
    ReportGrowth(GrowthArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct TransformArgs {
    /// Taylor order per layer, or one order for all layers.
    #[arg(long, value_delimiter = ',', value_name = "INT[,INT...]")]
    pub q_taylor: Vec<u32>,

    /// Global cap on the polynomial order.
    #[arg(long, value_name = "INT")]
    pub q_max: Option<u32>,

    /// regression or classification.
    #[arg(long)]
    pub mode: Option<Mode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long, value_name = "PATH")]
    pub weights: PathBuf,

    #[command(flatten)]
    pub transform: TransformArgs,

    /// Write the polynomial here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t)]
    pub format: Format,

    /// Print the N largest-magnitude terms as CSV on stdout. The polynomial
    /// itself is then only written when --out is given.
    #[arg(long, value_name = "N")]
    pub top_k: Option<usize>,

    /// Check the result against exact symbolic expansion (polynomial
    /// activations only).
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_name = "PATH")]
    pub weights: PathBuf,

    /// Headerless CSV, last column is the target.
    #[arg(long, value_name = "PATH")]
    pub data: PathBuf,

    #[command(flatten)]
    pub transform: TransformArgs,

    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Write nn_pred,poly_pred rows here.
    #[arg(long, value_name = "PATH")]
    pub pred_out: Option<PathBuf>,

    /// Include wall-clock timings in the report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct PartitionsArgs {
    /// Comma-separated positive labels, e.g. "1,1,2,3".
    pub multiset: String,

    /// Keep only partitions with exactly this many blocks.
    #[arg(long)]
    pub n: Option<usize>,

    /// Keep only partitions whose blocks have at most this many elements.
    #[arg(long)]
    pub q: Option<u32>,

    /// Print each block as a multiplicity vector over the distinct labels.
    #[arg(long)]
    pub vectors: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 3)]
    pub p: usize,

    /// Order of the generating polynomial.
    #[arg(long, default_value_t = 2)]
    pub q_poly: u32,

    /// Number of top-order terms in the generating polynomial.
    #[arg(long, default_value_t = 4)]
    pub interactions: usize,

    /// Hidden-layer counts to sweep.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub layers: Vec<usize>,

    /// Hidden-layer widths to sweep.
    #[arg(long, value_delimiter = ',', default_value = "50")]
    pub width: Vec<usize>,

    /// Hidden activations to sweep.
    #[arg(long, value_delimiter = ',', default_value = "tanh")]
    pub activation: Vec<Activation>,

    /// Seeds, one run per seed and configuration.
    #[arg(long, value_delimiter = ',', required = true)]
    pub seed: Vec<u64>,

    /// Keep hidden weight vectors at unit l1 norm.
    #[arg(long)]
    pub constrain: bool,

    #[arg(long)]
    pub epochs: Option<usize>,

    #[arg(long)]
    pub batch_size: Option<usize>,

    #[arg(long)]
    pub learning_rate: Option<f64>,

    #[arg(long, default_value_t = 500)]
    pub samples: usize,

    #[arg(long, default_value_t = 1.0)]
    pub noise_sd: f64,

    /// Training fraction of the random split.
    #[arg(long, default_value_t = 0.75)]
    pub train_frac: f64,

    #[command(flatten)]
    pub transform: TransformArgs,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long, value_name = "PATH")]
    pub weights: PathBuf,

    #[arg(long, value_name = "PATH")]
    pub data: PathBuf,

    /// Taylor order per layer, or one order for all layers.
    #[arg(long, value_delimiter = ',', value_name = "INT[,INT...]")]
    pub q_taylor: Vec<u32>,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    #[arg(long, value_delimiter = ',', default_value = "3,10,20")]
    pub p: Vec<usize>,

    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub q: Vec<u32>,

    /// Allow p above 50 or Q above 6.
    #[arg(long)]
    pub force: bool,

    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let file = config::FileConfig::load(cli.config.as_deref())?;
    let cache_dir = cli.cache_dir.as_deref();
    match cli.command {
        Command::Extract(args) => commands::extract::run(&args, &file, cache_dir),
        Command::Compare(args) => commands::compare::run(&args, &file, cache_dir),
        Command::Partitions(args) => commands::partitions::run(&args),
        Command::Simulate(args) => commands::simulate::run(&args, &file, cache_dir),
        Command::Diagnose(args) => commands::diagnose::run(&args, &file),
        Command::ReportGrowth(args) => commands::growth::run(&args),
    }
}

/// 2 for internal invariant violations, 1 for everything else.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let internal = err
        .chain()
        .filter_map(|e| e.downcast_ref::<nn2poly_core::Error>())
        .any(nn2poly_core::Error::is_internal);
    if internal {
        2
    } else {
        1
    }
}
