//! `hemisystem` command-line driver.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 invalid input, 3 resource budget.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{CommonArgs, RunConfig};

#[derive(Parser)]
#[command(
    name = "hemisystem",
    version,
    about = "Construct and verify hemisystems of Q⁻(5,q)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the hemisystem and write its JSON descriptor.
    Construct(CommonArgs),
    /// Run verification checks and write a JSON report.
    Verify(CommonArgs),
    /// Check the Gauss-sum identities by direct summation.
    Charsums(CommonArgs),
    /// Write the Cayley graph Cay(F_{q^6}, D) as an edge list.
    ExportGraph(CommonArgs),
    /// Print field and construction parameters.
    Info(CommonArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let args = match &cli.command {
        Command::Construct(a)
        | Command::Verify(a)
        | Command::Charsums(a)
        | Command::ExportGraph(a)
        | Command::Info(a) => a,
    };
    let result = RunConfig::resolve(args).and_then(|cfg| match cli.command {
        Command::Construct(_) => commands::construct(&cfg),
        Command::Verify(_) => commands::verify(&cfg),
        Command::Charsums(_) => commands::charsums(&cfg),
        Command::ExportGraph(_) => commands::export_graph(&cfg),
        Command::Info(_) => commands::info(&cfg),
    });
    match result {
        Ok(commands::Outcome::Pass) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
