//! `mgs`: generate, analyze, simulate, and sweep rumor-spreading
//! topologies under the one-connection-per-round model.
//!
//! Exit codes: 0 on success, 2 on usage or parameter errors, 1 on runtime
//! failures. All randomness flows from `--seed`; identical invocations
//! produce identical output bytes.

mod analyze;
mod common;
mod gen;
mod simulate;
mod sweep;

use clap::{Parser, Subcommand};

use crate::common::CliError;

#[derive(Parser)]
#[command(name = "mgs", version, about = "Rumor spreading in the mobile telephone model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file
    Gen(gen::GenArgs),
    /// Report expansion, conductance, matching ratio, and degree stats
    Analyze(analyze::AnalyzeArgs),
    /// Run seeded trials of a protocol on one graph
    Simulate(simulate::SimulateArgs),
    /// Run a protocol across a family of sizes and summarize scaling
    Sweep(sweep::SweepArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => gen::run(args),
        Command::Analyze(args) => analyze::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Sweep(args) => sweep::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(match err {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        });
    }
}
