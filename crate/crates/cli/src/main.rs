//! `torres`: batch front end for the toric residue engine.
//!
//! Reads a JSON job, runs one command and prints a JSON report on stdout.
//! Exit status is 0 on success, 1 for malformed input and 2 when the input
//! violates a mathematical precondition.

mod commands;
mod error;
mod job;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use commands::{Command, Overrides};
use error::CliError;
use job::Job;

#[derive(Debug, Parser)]
#[command(name = "torres", version, about = "Exact and numeric toric residues")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Path to the JSON job document.
    #[arg(long)]
    job: PathBuf,
    /// Monte Carlo sample count (numeric only).
    #[arg(long)]
    samples: Option<usize>,
    /// RNG seed (numeric only).
    #[arg(long)]
    seed: Option<u64>,
    /// Index of the maximal cone used as affine chart (numeric only).
    #[arg(long)]
    chart: Option<usize>,
    /// Include the cofactors h_i with g = c J + sum h_i f_i (residue only).
    #[arg(long)]
    cofactors: bool,
}

fn execute(cli: &Cli) -> Result<serde_json::Value, CliError> {
    let job = Job::load(&cli.job)?;
    let flags = Overrides {
        samples: cli.samples,
        seed: cli.seed,
        chart: cli.chart,
        cofactors: cli.cofactors,
    };
    commands::run(cli.command, &job, &flags)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (report, code) = match execute(&cli) {
        Ok(report) => (report, 0),
        Err(e) => {
            eprintln!("torres: {e}");
            (json!({"status": e.status(), "message": e.to_string()}), e.exit_code())
        }
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    ExitCode::from(code as u8)
}
