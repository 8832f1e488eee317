//! `qswrank` — node significance ranking via quantum stochastic walks.
//!
//! Subcommands: `rank` (quantum ranking), `classical` (stationary baseline),
//! `bench` (time/memory scaling against synthetic graphs). Exit codes:
//! 0 success, 2 input error, 3 numerical failure.

mod args;
mod bench_cmd;
mod manifest;
mod rank_cmd;

use clap::Parser;
use qswrank_core::mem::CountingAlloc;

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc::new();

/// Failure modes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: missing files, parse failures, out-of-range flags.
    Input(String),
    /// The solver failed: stiffness, non-convergence.
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl From<qswrank_core::net::NetError> for CliError {
    fn from(e: qswrank_core::net::NetError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<qswrank_core::operators::OperatorError> for CliError {
    fn from(e: qswrank_core::operators::OperatorError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<qswrank_core::rank::RankError> for CliError {
    fn from(e: qswrank_core::rank::RankError) -> Self {
        use qswrank_core::rank::RankError;
        match e {
            RankError::Operator(inner) => CliError::Input(inner.to_string()),
            RankError::InvalidHubConstant(_) => CliError::Input(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<qswrank_core::integrator::IntegratorError> for CliError {
    fn from(e: qswrank_core::integrator::IntegratorError) -> Self {
        use qswrank_core::integrator::IntegratorError;
        match e {
            IntegratorError::InvalidConfig(_) => CliError::Input(e.to_string()),
            IntegratorError::Stiff { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() {
    let cli = args::Cli::parse();
    if let Some(threads) = cli.threads_requested() {
        if threads > 0 {
            // errors only if a pool already exists, which is fine
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
    let outcome = match cli.command {
        args::Command::Rank(a) => rank_cmd::run_rank(&a),
        args::Command::Classical(a) => rank_cmd::run_classical(&a),
        args::Command::Bench(a) => bench_cmd::run_bench(&a),
    };
    if let Err(e) = outcome {
        eprintln!("qswrank: {e}");
        std::process::exit(e.exit_code());
    }
}
