use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isobound::asymmetric::{Method, DEFAULT_GRID_M};
use isobound::baseline::SMALL_SET_ALPHA;
use isobound::symmetric::DEFAULT_NU_TOL;

mod report;
mod sample;
mod verify;

#[derive(Parser)]
#[command(
    name = "isobound",
    version,
    about = "Expansion lower bounds for random regular graphs"
)]
struct Cli {
    /// Worker threads for parallel work (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root nu* of the balanced-cut exponent.
    NuStar {
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = DEFAULT_NU_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// First-moment baseline bound.
    Baseline {
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        json: bool,
    },
    /// Grid certificate that unbalanced cuts have a negative exponent.
    Certify(CertifyArgs),
    /// Comparison table of lower bounds.
    Table {
        #[arg(long)]
        csv: bool,
    },
    /// Sample a pairing-model graph and compute its expansion.
    Sample(SampleArgs),
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    delta: usize,
    /// Target bound (default: nu* minus --margin).
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    margin: f64,
    #[arg(long, default_value_t = DEFAULT_GRID_M)]
    grid: usize,
    #[arg(long, default_value_t = Method::Corner, value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value_t = SMALL_SET_ALPHA)]
    alpha_floor: f64,
    /// Lower end of the gamma/alpha range (default: the baseline bound).
    #[arg(long)]
    nu_lower: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    delta: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumerate all subsets (n <= 24). Default when n allows it.
    #[arg(long, conflicts_with = "local_search")]
    exact: bool,
    #[arg(long)]
    local_search: bool,
    /// Write the sampled graph as an edge list.
    #[arg(long)]
    emit: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Entropy,
    Rootbound,
    Counting,
    Ordering,
    Dominance,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: isobound::Error| e.to_string())
}

/// Outcome of a command that ran to completion.
pub enum Status {
    Success,
    /// Certification or verification failed.
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::NuStar { delta, tol, json } => report::nu_star(delta, tol, json),
        Command::Baseline { delta, json } => report::baseline(delta, json),
        Command::Certify(args) => report::certify(&args),
        Command::Table { csv } => report::table(csv),
        Command::Sample(args) => sample::run(&args),
        Command::Verify {
            suite,
            trials,
            seed,
        } => verify::run(suite, trials, seed),
    };
    match result {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
