mod bench;
mod protocol;

use std::io::{self, BufReader};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Sliding-window substring index: stream replay, line-protocol queries,
/// audits, and a benchmark harness.
#[derive(Parser)]
#[command(name = "slidetree", version, about)]
struct Cli {
    /// Print window-relative positions instead of absolute stream positions.
    #[arg(long, global = true)]
    relative: bool,

    /// Run a full structural audit after every shift.
    #[arg(long, global = true)]
    paranoid: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a command script from a file (same protocol as stdin).
    Replay { script: PathBuf },
    /// Feed a corpus through the index and compare query strategies.
    Bench {
        /// File whose raw bytes form the stream.
        #[arg(long)]
        corpus: PathBuf,
        /// Window capacity.
        #[arg(long)]
        window: usize,
        /// File with one query per line.
        #[arg(long)]
        queries: PathBuf,
        /// Also write the per-query table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Number of sampled query points along the stream.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = protocol::Options { relative: cli.relative, paranoid: cli.paranoid };
    let ok = match cli.command {
        None => {
            let stdin = io::stdin();
            let mut out = io::stdout().lock();
            protocol::run(BufReader::new(stdin.lock()), &mut out, opts)
        }
        Some(Command::Replay { script }) => {
            let file = match std::fs::File::open(&script) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("cannot open {}: {}", script.display(), e);
                    return ExitCode::FAILURE;
                }
            };
            let mut out = io::stdout().lock();
            protocol::run(BufReader::new(file), &mut out, opts)
        }
        Some(Command::Bench { corpus, window, queries, csv, samples }) => {
            match bench::run(&corpus, window, &queries, csv.as_deref(), samples) {
                Ok(()) => true,
                Err(e) => {
                    eprintln!("bench failed: {}", e);
                    false
                }
            }
        }
    };
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
