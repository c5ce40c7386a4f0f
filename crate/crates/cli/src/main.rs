//! `graphsep`: degree condition, PPT, separable decompositions and sweeps
//! for density matrices of graphs.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 bad input or unmet precondition, 2 internal inconsistency.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "graphsep", version, about = "Separability of graph density matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree condition, PPT and (where possible) a separability decision for a graph.
    Analyze {
        /// Graph file, text or JSON.
        file: PathBuf,
        /// Reinterpret the vertices under another split with the same p·q.
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        split: Option<Vec<usize>>,
    },
    /// Separable decomposition by a named family.
    Decompose(DecomposeArgs),
    /// Sweep a family of graphs comparing degree condition, PPT and separability.
    Sweep(SweepArgs),
    /// Search for product vectors in the range of a state.
    RangeSearch(RangeArgs),
    /// Print the worked example graphs.
    Figures,
}

#[derive(Args)]
#[command(group(ArgGroup::new("family").required(true).args(
    ["nearest_point", "matching", "block_matching", "circulant", "z2n"]
)))]
struct DecomposeArgs {
    /// Graph file, circulant spec JSON or Z2^n function JSON.
    file: PathBuf,
    #[arg(long)]
    nearest_point: bool,
    #[arg(long)]
    matching: bool,
    #[arg(long)]
    block_matching: bool,
    /// Circulant spec under the split P x Q.
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    circulant: Option<Vec<usize>>,
    /// Z2^n function under the split 2^K x 2^L.
    #[arg(long, num_args = 2, value_names = ["K", "L"])]
    z2n: Option<Vec<u32>>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "random", "matchings"])))]
struct SweepArgs {
    p: usize,
    q: usize,
    #[arg(long)]
    exhaustive: bool,
    /// Seeded random graphs with edge probability 1/2.
    #[arg(long, num_args = 2, value_names = ["SEED", "COUNT"])]
    random: Option<Vec<u64>>,
    /// All perfect matchings, with the matching-specific checks.
    #[arg(long)]
    matchings: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write one CSV row per graph.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct RangeArgs {
    /// Graph file or density JSON `{"p":..,"q":..,"matrix":[[[re,im],..],..]}`.
    file: PathBuf,
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    split: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Search the range of (I − ρ)/(n − 1) instead of ρ.
    #[arg(long)]
    complement: bool,
}

pub enum CliError {
    User(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::User(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    // Usage errors are user errors (exit 1); code 2 is reserved for bugs.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Analyze { file, split } => commands::analyze(&file, split.as_deref()),
        Command::Decompose(args) => commands::decompose(&args),
        Command::Sweep(args) => commands::sweep(&args),
        Command::RangeSearch(args) => commands::range_search(&args),
        Command::Figures => commands::figures(),
    };
    match result {
        Ok(value) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (kind, msg) = match &e {
                CliError::User(m) => ("error", m),
                CliError::Internal(m) => ("internal error", m),
            };
            eprintln!("graphsep: {kind}: {msg}");
            ExitCode::from(e.exit_code())
        }
    }
}
