use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ncham_cli::{load_model, run, Command, Format, Options};
use ncham_core::suite::{DEFAULT_CASES, DEFAULT_SEED};

/// Cartan calculus and Hamiltonian dynamics on noncommutative algebras.
#[derive(Debug, Parser)]
#[command(name = "ncham", version)]
struct Cli {
    /// Model descriptor: torus:p=2, matrix:n=3, cuntz:n=2, polymat:D=3.
    #[arg(long, global = true, default_value = "torus:p=2")]
    model: String,
    /// Read the model from a presentation file instead.
    #[arg(long, global = true)]
    presentation: Option<PathBuf>,
    /// Ansatz override: B=<n> (torus), D=<n> (polymat), traceless|full (cuntz).
    #[arg(long, global = true)]
    ansatz: Option<String>,
    /// Truncation order of `flow`.
    #[arg(long, global = true, default_value_t = 3)]
    order: u32,
    /// Seed of the property suite.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random cases per property in `check`.
    #[arg(long, global = true, default_value_t = DEFAULT_CASES)]
    cases: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        order: cli.order,
        seed: cli.seed,
        cases: cli.cases,
    };
    let result = load_model(&cli.model, cli.presentation.as_deref(), cli.ansatz.as_deref())
        .and_then(|m| run(&m, &cli.command, &opts));
    match result {
        Ok(out) => {
            // a closed pipe (`| head`) is not an error
            let _ = writeln!(std::io::stdout(), "{}", out.render(cli.format));
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
