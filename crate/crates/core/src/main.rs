use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use compressed_opt::cli::{self, Command, ReportKind};

/// Distributed optimization simulator with communication compression.
#[derive(Parser)]
#[command(name = "compressed-opt", version, about)]
struct Cli {
    /// Parallel run slots (defaults to all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a run config and write traces, metrics and a summary
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Grid-search gamma (or eta for plain EF) over the config's grid
    Grid {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a named invariant suite (contractivity, error-identity,
    /// lossless-reduction, rate-fit-synthetic)
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit a report as CSV to stdout (slope, speedup, weights)
    Report {
        #[arg(long)]
        kind: String,
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("COMPRESSED_OPT_LOG")).init();
    let cli = Cli::parse();

    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("warning: could not configure {jobs} jobs: {e}");
        }
    }

    let command = match cli.command {
        Cmd::Run { config, out } => Command::Run { config, out },
        Cmd::Grid { config, out } => Command::Grid { config, out },
        Cmd::Verify { suite, seed } => Command::Verify { suite, seed },
        Cmd::Report { kind, dir } => match ReportKind::parse(&kind) {
            Ok(kind) => Command::Report { dir, kind },
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
    };
    ExitCode::from(cli::dispatch(&command) as u8)
}
