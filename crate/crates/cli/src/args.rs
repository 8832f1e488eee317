//! Flag definitions for the three subcommands.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qswrank", version, about = "Node significance ranking via quantum stochastic walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn threads_requested(&self) -> Option<usize> {
        match &self.command {
            Command::Rank(a) => Some(a.threads),
            Command::Classical(a) => Some(a.threads),
            Command::Bench(a) => Some(a.threads),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum ranking of an edge-list network.
    Rank(RankArgs),
    /// Classical stationary-distribution baseline of the same network.
    Classical(ClassicalArgs),
    /// Time/memory scaling against seeded synthetic graphs.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFamily {
    /// Directed Erdős–Rényi with the requested mean out-degree.
    Random,
    /// Complete directed graph.
    Complete,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Edge-list CSV (`src_label,dst_label` per line).
    #[arg(long)]
    pub input: String,
    /// Optional node metadata CSV (`label,lon,lat`), reporting only.
    #[arg(long)]
    pub metadata: Option<String>,
    /// Classical/quantum interpolation weight.
    #[arg(long, default_value_t = 0.9)]
    pub omega: f64,
    /// Damping of the mix with the uniform hopping matrix.
    #[arg(long, default_value_t = 0.9)]
    pub q: f64,
    /// Hub-classification constant.
    #[arg(long, default_value_t = 10.0)]
    pub c: f64,
    /// Per-step integrator tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Initial step size.
    #[arg(long, default_value_t = 0.01)]
    pub h0: f64,
    /// Walk-time horizon.
    #[arg(long = "t-max", default_value_t = 1000.0)]
    pub t_max: f64,
    /// Steady-state threshold on the right-hand-side norm.
    #[arg(long = "ss-eps", default_value_t = 1e-8)]
    pub ss_eps: f64,
    /// Rows in the printed table.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Worker threads for the kernels (0 = automatic).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Ranking file format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Also run the classical baseline and print max |Δp|.
    #[arg(long = "classical-check", default_value_t = false)]
    pub classical_check: bool,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    /// Edge-list CSV (`src_label,dst_label` per line).
    #[arg(long)]
    pub input: String,
    /// Optional node metadata CSV (`label,lon,lat`), reporting only.
    #[arg(long)]
    pub metadata: Option<String>,
    /// Damping of the mix with the uniform hopping matrix.
    #[arg(long, default_value_t = 0.9)]
    pub q: f64,
    /// Hub-classification constant.
    #[arg(long, default_value_t = 10.0)]
    pub c: f64,
    /// Rows in the printed table.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Worker threads for the kernels (0 = automatic).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Ranking file format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Node counts to benchmark.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Seed for the synthetic graphs.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Mean out-degree of the random family.
    #[arg(long, default_value_t = 15.0)]
    pub degree: f64,
    /// Synthetic graph family.
    #[arg(long, value_enum, default_value_t = GraphFamily::Random)]
    pub family: GraphFamily,
    /// Classical/quantum interpolation weight.
    #[arg(long, default_value_t = 0.9)]
    pub omega: f64,
    /// Damping of the mix with the uniform hopping matrix.
    #[arg(long, default_value_t = 0.9)]
    pub q: f64,
    /// Per-step integrator tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Initial step size.
    #[arg(long, default_value_t = 0.01)]
    pub h0: f64,
    /// Fixed walk-time horizon for comparable rows.
    #[arg(long = "t-max", default_value_t = 1.0)]
    pub t_max: f64,
    /// Steady-state threshold; 0 keeps the horizon fixed.
    #[arg(long = "ss-eps", default_value_t = 0.0)]
    pub ss_eps: f64,
    /// Worker threads for the kernels (0 = automatic).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Cross-check small sizes against the dense-superoperator propagator.
    #[arg(long, default_value_t = false)]
    pub oracle: bool,
    /// Skip rows whose estimated kernel memory exceeds this many MiB.
    #[arg(long = "mem-cap-mb")]
    pub mem_cap_mb: Option<usize>,
}
