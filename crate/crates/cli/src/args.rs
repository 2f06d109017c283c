use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use popta::solver::Engine;

/// Verification and strategy synthesis for partially observable
/// probabilistic timed automata and POMDPs.
#[derive(Debug, Parser)]
#[command(name = "popta", version)]
pub struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound the optimal value of a property and answer threshold queries.
    Verify(RunArgs),
    /// Synthesise a strategy and report its exact value.
    Synth(RunArgs),
    /// Write the digital POMDP, state legend or a value table.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Model file (`.poptam` source or POMDP `.json` document).
    pub model: PathBuf,
    /// Property text, or a file containing it.
    pub property: String,

    /// Grid resolutions to try, in increasing order.
    #[arg(long, value_delimiter = ',')]
    pub resolution_schedule: Option<Vec<u32>>,
    /// Stop once upper - lower is at most this.
    #[arg(long, default_value_t = 1e-3)]
    pub gap: f64,
    /// Value iteration convergence threshold.
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    /// Value iteration sweep cap (default 10·M·|S|).
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long, default_value_t = Engine::J1)]
    pub engine: Engine,
    /// Cap on explored strategy beliefs.
    #[arg(long, default_value_t = 1_000_000)]
    pub node_budget: usize,
    /// Beliefs closer than this (max-norm) share a strategy node.
    #[arg(long, default_value_t = popta::pomdp::DEDUP_TOL)]
    pub dedup_tol: f64,

    /// Override a model constant, `NAME=VALUE`.
    #[arg(long = "const", value_name = "NAME=VALUE")]
    pub consts: Vec<String>,

    #[arg(long, value_name = "FILE")]
    pub export_strategy: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub export_pomdp: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub export_values: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub export_legend: Option<PathBuf>,

    /// Print only the result line.
    #[arg(long)]
    pub quiet: bool,
    /// Print a machine-readable report on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub model: PathBuf,
    /// Property whose transformed model is exported.
    pub property: Option<String>,

    #[arg(long = "const", value_name = "NAME=VALUE")]
    pub consts: Vec<String>,
    /// Resolution of the exported value table.
    #[arg(long, default_value_t = 2)]
    pub resolution: u32,
    #[arg(long, default_value_t = Engine::J1)]
    pub engine: Engine,

    #[arg(long, value_name = "FILE")]
    pub export_pomdp: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub export_legend: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub export_values: Option<PathBuf>,
}
