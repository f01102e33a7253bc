//! `wdconc`: tables, exhaustive verification sweeps and concentration
//! experiments for weight distributions of random linear codes.
//!
//! Exit status is 0 when everything checked holds, 1 when a verification
//! fails, and 2 for usage or domain errors.

mod commands;
mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use commands::{acr, concentrate, lemma, moments, table1, verify_cov};
use report::Report;

#[derive(Debug, Parser)]
#[command(
    name = "wdconc",
    version,
    about = "Weight-distribution concentration for random linear codes"
)]
struct Cli {
    /// Worker threads for parallel sweeps (0 = one per core); never changes results
    #[arg(long, global = true, env = "WDCONC_THREADS")]
    threads: Option<usize>,
    /// Output format [default: csv, json for `acr`]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Crossover thresholds eps' where the undetected error probability starts to concentrate
    Table1(table1::Table1Args),
    /// Exhaustively verify E[A_w] and COV[A_w1, A_w2] for all small ensembles
    VerifyCov(verify_cov::VerifyCovArgs),
    /// Verify #{h : h.x = 0, h.y = 0} for all pairs of small vectors
    Lemma(lemma::LemmaArgs),
    /// Exact and sampled concentration of a functional across block lengths
    Concentrate(concentrate::ConcentrateArgs),
    /// Asymptotic concentration rate of a functional
    Acr(acr::AcrArgs),
    /// Exact weight-count and functional moments of one ensemble
    Moments(moments::MomentsArgs),
}

fn execute(command: &Command) -> Result<Report> {
    match command {
        Command::Table1(a) => Ok(table1::run(a)),
        Command::VerifyCov(a) => verify_cov::run(a),
        Command::Lemma(a) => lemma::run(a),
        Command::Concentrate(a) => concentrate::run(a),
        Command::Acr(a) => acr::run(a),
        Command::Moments(a) => moments::run(a),
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("starting the worker pool")?;
    }
    let report = execute(&cli.command)?;
    let format = cli.format.unwrap_or(match cli.command {
        Command::Acr(_) => Format::Json,
        _ => Format::Csv,
    });
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(ExitCode::from(report.outcome.exit_code()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
