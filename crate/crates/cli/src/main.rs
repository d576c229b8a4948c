//! `evoca`: simulate, evaluate, evolve and filter radius-3 cellular automata.

mod evaluate;
mod evolve;
mod filter;
mod ic;
mod manifest;
mod report;
mod simulate;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "evoca", version, about)]
struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a rule and write its space-time diagram.
    Simulate(simulate::Args),
    /// Estimate task performance of rules from a rule-list file.
    Evaluate(evaluate::Args),
    /// Evolve rules for density plus a logical task.
    Evolve(evolve::Args),
    /// Filter a space-time diagram against a domain catalog.
    Filter(filter::Args),
    /// Tabulate an evaluation CSV against published values.
    Report(report::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    match cli.command {
        Command::Simulate(args) => simulate::run(args),
        Command::Evaluate(args) => evaluate::run(args),
        Command::Evolve(args) => evolve::run(args),
        Command::Filter(args) => filter::run(args),
        Command::Report(args) => report::run(args),
    }
}
