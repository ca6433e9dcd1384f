//! `ringchain`: reproducible CSV/JSON reports from the spectral engine.
//!
//! Exit codes: 0 success, 1 invalid arguments, 2 solver failure, 3 self-check failure.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::commands::Failure;
use crate::config::{Cli, RunConfig};

const EXIT_INVALID: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_SELFCHECK: u8 = 3;

fn destination(cfg: &RunConfig) -> Option<PathBuf> {
    if let Some(p) = &cfg.output {
        return Some(p.clone());
    }
    let dir = std::env::var_os("RINGCHAIN_OUTPUT_DIR")?;
    Some(PathBuf::from(dir).join(format!("{}.{}", cfg.command.name(), cfg.format.extension())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match cli.into_config() {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let outcome = match commands::run(&cfg) {
        Ok(o) => o,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INVALID);
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_SOLVER);
        }
    };
    let text = report::render(&cfg, &outcome.table);
    match destination(&cfg) {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INVALID);
            }
        }
        None => print!("{text}"),
    }
    if !outcome.checks_passed {
        eprintln!("error: self-check failed");
        return ExitCode::from(EXIT_SELFCHECK);
    }
    ExitCode::SUCCESS
}
