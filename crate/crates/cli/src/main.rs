//! `comdet`: detect, score, generate and benchmark communities from the
//! command line.
//!
//! Exit codes: 0 on success, 2 for usage or input errors, 3 when a computed
//! result fails an internal consistency check.

mod bench;
mod detect;
mod failure;
mod generate;
mod input;
mod score;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::failure::Failure;

#[derive(Debug, Parser)]
#[command(name = "comdet", version, about = "Parallel community detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect communities in a graph.
    Detect(detect::DetectArgs),
    /// Score a partition against a graph and optionally a reference partition.
    Score(score::ScoreArgs),
    /// Generate a planted partition graph with its ground truth.
    Generate(generate::GenerateArgs),
    /// Measure strong or weak scaling over a list of thread counts.
    Bench(bench::BenchArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version go to stdout with status 0, usage errors exit 2
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { failure::USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Detect(args) => detect::run(&args),
        Command::Score(args) => score::run(&args),
        Command::Generate(args) => generate::run(&args),
        Command::Bench(args) => bench::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
