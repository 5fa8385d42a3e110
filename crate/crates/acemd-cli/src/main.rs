//! Command-line front end for adaptive ensemble decomposition and Hilbert
//! spectral analysis of CSV time series.
//!
//! Data goes to files under `--out-dir`; progress and summaries go to
//! standard error. Exit codes: 0 success, 2 usage, 3 input data rejected,
//! 4 decomposition failed, 5 analysis failed, 6 I/O error.

mod compare;
mod decompose;
mod error;
mod filter;
mod ingest;
mod manifest;
mod output;
mod pipeline;
mod plot;
mod spectrum;

use clap::{Parser, Subcommand};

use crate::error::Result;

#[derive(Parser)]
#[command(name = "acemd", version, about, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a series into oscillatory modes plus a residual trend.
    Decompose(decompose::DecomposeCmd),
    /// Split a series into slow and fast parts and profile their volatility.
    Filter(filter::FilterCmd),
    /// Hilbert spectrum and power-exponent fit of the decomposed series.
    Spectrum(spectrum::SpectrumCmd),
    /// Decompose several series over their common dates and compare modes.
    Compare(compare::CompareCmd),
}

fn run(argv: &[String]) -> Result<()> {
    let cli = Cli::parse_from(argv);
    match cli.command {
        Command::Decompose(cmd) => cmd.run(argv),
        Command::Filter(cmd) => cmd.run(argv),
        Command::Spectrum(cmd) => cmd.run(argv),
        Command::Compare(cmd) => cmd.run(argv),
    }
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    if let Err(e) = run(&argv) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
