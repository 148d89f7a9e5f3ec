use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use levelrank::generate::KeepRule;

#[derive(Debug, Parser)]
#[command(name = "levelrank", version, about = "Partitioned PageRank on directed graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic edge list.
    #[command(subcommand)]
    Generate(Generate),
    /// Print the component census of a graph.
    Partition(PartitionArgs),
    /// Compute non-normalized PageRank.
    Rank(RankArgs),
    /// Sweep tolerance or damping and record iteration work as CSV.
    Bench(BenchArgs),
    /// Write edge coordinates after reordering vertices by level.
    Spy(SpyArgs),
    /// Check the partition and ranks of a small graph against oracles.
    Validate(ValidateArgs),
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// Directed Barabási–Albert graph.
    Ba(BaArgs),
    /// Disjoint copies of an input graph joined by random bridge edges.
    Replicate(ReplicateArgs),
}

#[derive(Debug, Args)]
pub struct BaArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 12)]
    pub m: usize,
    /// log2, all or fixed:K
    #[arg(long, default_value = "log2")]
    pub keep_rule: KeepRule,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplicateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub copies: usize,
    #[arg(long, default_value_t = 0)]
    pub bridges: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge list, one `src<TAB>dst` per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Keep self-loops in the rank computation.
    #[arg(long)]
    pub keep_loops: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Damping factor [default: 0.85]
    #[arg(long)]
    pub c: Option<f64>,
    /// Convergence tolerance [default: 1e-9, or 1e-10 for a damping sweep]
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = levelrank::DEFAULT_SMALL_THRESHOLD)]
    pub small_threshold: usize,
    #[arg(long)]
    pub parallel: bool,
    /// Worker count for --parallel; defaults to the hardware parallelism.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Baseline,
    Partitioned,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long, value_enum, default_value_t = Method::Partitioned)]
    pub method: Method,
    /// `vertex<TAB>weight` lines; unlisted vertices get weight 0.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Ranks TSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Solve report; JSON when the name ends in `.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sweep {
    Tol,
    C,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long, value_enum, default_value_t = Sweep::Tol)]
    pub sweep: Sweep,
    /// Comma-separated sweep values; defaults to the standard grid.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// Restrict to one method; both by default.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = levelrank::DEFAULT_SMALL_THRESHOLD)]
    pub small_threshold: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 0.85)]
    pub c: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 2)]
    pub small_threshold: usize,
}
