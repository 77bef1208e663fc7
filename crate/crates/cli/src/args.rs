use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "blockfuse",
    version,
    about = "Reference-guided block fusion and evaluation toolkit"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Weight of the MS-SSIM term in the mixed loss.
    #[arg(long, global = true, default_value_t = blockfuse::metrics::DEFAULT_OMEGA)]
    pub omega: f64,

    /// Significance level for intervals and tests.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub alpha: f64,

    /// Block sizes for sweeps, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = blockfuse::fusion::DEFAULT_BLOCK_SIZES)]
    pub blocks: Vec<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare a prediction with its ground truth.
    Metrics {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fuse candidates block by block against a ground truth.
    Fuse {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        candidates: Vec<PathBuf>,
        /// Block side M.
        #[arg(long)]
        block: usize,
        /// Fused greymap output.
        #[arg(long)]
        out: PathBuf,
        /// Winner map JSON output.
        #[arg(long)]
        winners: PathBuf,
        /// Optional 8-bit winner map visualization.
        #[arg(long)]
        winner_pgm: Option<PathBuf>,
        /// Bit depth of the fused file; defaults to the ground truth's.
        #[arg(long, value_parser = ["8", "16"])]
        depth: Option<String>,
    },
    /// Fuse at every block size and tabulate the fused-vs-gt metrics.
    Sweep {
        #[arg(
            long,
            required_unless_present = "dataset",
            conflicts_with = "dataset",
            requires = "candidates"
        )]
        gt: Option<PathBuf>,
        #[arg(long, num_args = 1..)]
        candidates: Vec<PathBuf>,
        /// Directory holding gt.pgm and cand_<k>.pgm, or subdirectories that do.
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Binary classification report from a `label,score` CSV.
    ClassifyEval {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long, default_value_t = blockfuse::classify::DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ANOVA, Levene and Tukey HSD from a `group,value` CSV.
    Stats {
        #[arg(long)]
        groups: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate seeded synthetic candidate sets.
    Synth {
        #[arg(long)]
        seed: u64,
        /// Candidates per item.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 256)]
        width: usize,
        #[arg(long, default_value_t = 256)]
        height: usize,
        #[arg(long)]
        out_dir: PathBuf,
        /// Number of items; more than one writes item_<i> subdirectories.
        #[arg(long, default_value_t = 1)]
        items: usize,
    },
}
