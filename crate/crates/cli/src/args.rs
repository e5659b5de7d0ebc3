use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::models::Model;

#[derive(Debug, Parser)]
#[command(name = "ihs", version, about = "Compatible spanning structures in incompatibility systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Report boundedness and optionally validate a certificate.
    Check(CheckArgs),
    /// Run an exact solver.
    Solve(SolveArgs),
    /// List the mates of a k-tuple.
    Mates(MatesArgs),
    /// List absorbers of a vertex.
    Absorbers(AbsorbersArgs),
    /// Run the absorption pipeline for a Hamilton k-th power.
    Pipeline(PipelineArgs),
    /// Run a grid of solver runs and write CSV.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file instead of stdout.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    #[arg(long)]
    pub budget_secs: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Single-threaded search; output depends only on the inputs.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
    /// Boundedness of the random system.
    #[arg(long, default_value_t = 0)]
    pub bound: usize,
    /// Edge probability for gnp and dirac.
    #[arg(long)]
    pub p: Option<f64>,
    /// Minimum degree for dirac; defaults to ceil(n/2).
    #[arg(long)]
    pub min_degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub instance: PathBuf,
    /// Certificate or solve report to validate.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Fail unless the system is this bounded.
    #[arg(long)]
    pub bound: Option<usize>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(subcommand)]
    pub problem: SolveProblem,
}

#[derive(Debug, Subcommand)]
pub enum SolveProblem {
    /// Spanning cycle whose k-th power is compatible.
    HamiltonPower {
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Partition into compatible r-cliques.
    CliqueFactor {
        instance: PathBuf,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Shortest compatible power path from one k-tuple to another.
    Connect {
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        from: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        to: Vec<usize>,
        /// Vertices the interior must avoid.
        #[arg(long, value_delimiter = ',')]
        forbid: Vec<usize>,
        /// Defaults to every vertex outside the two ends.
        #[arg(long)]
        max_interior: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct MatesArgs {
    pub instance: PathBuf,
    /// Ordered tuple, comma separated; its length is k.
    #[arg(long, value_delimiter = ',', required = true)]
    pub tuple: Vec<usize>,
    /// List at most this many mates; the count is always exact.
    #[arg(long)]
    pub limit: Option<usize>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct AbsorbersArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub vertex: usize,
    #[arg(long)]
    pub k: usize,
    /// Both ends need at least ceil(beta * n^k) mates.
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long)]
    pub limit: Option<usize>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// TOML file with pipeline parameters; flags override it.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub attempts: Option<usize>,
    #[arg(long)]
    pub max_interior: Option<usize>,
    /// Node budget for each connection and absorber search.
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// TOML grid description.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub deterministic: bool,
    #[command(flatten)]
    pub out: Output,
}
