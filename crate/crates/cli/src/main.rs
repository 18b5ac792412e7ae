// SPDX-License-Identifier: Apache-2.0

mod commands;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::BenchArgs;
use error::EXIT_USAGE;

/// Configuration model with triadic closure: generate graphs, evaluate the
/// closed forms, check them by simulation and run community benchmarks.
#[derive(Debug, Parser)]
#[command(name = "ctc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate one graph and write edges.tsv, communities.tsv and manifest.json.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate the closed forms; prints JSON, or a CSV with --sweep.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// KEY=START:STOP:STEP over a, q or r.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Compare the closed forms with replica means.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 50)]
        reps: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a community detector by NMI along a parameter sweep.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// KEY=START:STOP:STEP over a, q or r.
        #[arg(long)]
        sweep: String,
        /// fast_unfolding, label_propagation or external.
        #[arg(long, default_value = "fast_unfolding")]
        detector: String,
        #[arg(long, default_value_t = 30)]
        reps: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Directory of cell{C}-rep{R}.tsv partitions for the external detector.
        #[arg(long)]
        partitions: Option<PathBuf>,
        /// Also write every benchmark graph under OUT/graphs.
        #[arg(long)]
        emit_graphs: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if informational { ExitCode::SUCCESS } else { ExitCode::from(EXIT_USAGE as u8) };
        }
    };
    let result = match &cli.command {
        Command::Generate { config, out, seed } => commands::generate_cmd(config, out, *seed),
        Command::Analyze { config, out, sweep } => commands::analyze_cmd(config, out.as_deref(), sweep.as_deref()),
        Command::Verify { config, reps, seed, out } => commands::verify_cmd(config, out.as_deref(), *reps, *seed),
        Command::Bench { config, sweep, detector, reps, seed, out, partitions, emit_graphs } => {
            commands::bench_cmd(&BenchArgs {
                config,
                out,
                sweep,
                detector,
                reps: *reps,
                seed: *seed,
                partitions: partitions.as_deref(),
                emit_graphs: *emit_graphs,
            })
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
