//! `nlgames` — analyze nonlocal game definitions under classical, quantum
//! and no-signaling theories, regenerate the reference results table, and
//! evaluate the single-qubit fine-grained bound.
//!
//! Exit codes: 0 success; 1 reproduce-row failure; 2 input/parse error;
//! 3 enumeration or LP size budget exceeded; 4 internal invariant violation.

mod report;
mod reproduce;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "nlgames", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a JSON game file under all three theories.
    Analyze {
        /// Path to the game definition (see games/*.json for the schema).
        game_file: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        /// Comma-separated shared states: ghz, w, phi_plus, or an inline
        /// JSON amplitude array. Defaults by party count.
        #[arg(long)]
        states: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock timings per stage (makes output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Recompute every reference value and compare against its target.
    Reproduce {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the fine-grained bound ζ for a measurement list.
    Zeta {
        /// Inline JSON: [{"p":0.5,"theta":0.0,"phi":0.0,"outcome":0}, ...]
        #[arg(long)]
        measurements: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Uniform failure type carrying the process exit code.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }

    pub fn from_core(err: nlgames_core::Error) -> Self {
        use nlgames_core::Error::*;
        let code = match err {
            EnumerationBudget(_) | SizeBudget(_) => 3,
            _ => 4,
        };
        Self { code, message: err.to_string() }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { game_file, seed, restarts, states, format, out, timings } => {
            report::run_analyze(&game_file, seed, restarts, states.as_deref(), format, timings)
                .and_then(|text| emit(&text, out.as_ref()))
                .map(|()| ExitCode::SUCCESS)
        }
        Command::Reproduce { seed, restarts, format, out } => {
            reproduce::run_reproduce(seed, restarts, format).and_then(|(text, all_pass)| {
                emit(&text, out.as_ref())?;
                Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
            })
        }
        Command::Zeta { measurements, out } => report::run_zeta(&measurements)
            .and_then(|text| emit(&text, out.as_ref()))
            .map(|()| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
