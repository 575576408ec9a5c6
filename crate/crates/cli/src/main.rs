//! `calogero`: kernels, eigenfunctions, figure grids, verification, oracle solves
//! and packet evolution from the command line.
//!
//! Exit status is 0 on success, 1 when `verify` ran but a check failed, and 2 on
//! any error. Errors are a single line `error: <kind>: <message>` on stderr.

mod args;
mod commands;
mod numbers;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: usage: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Grid(a) => commands::grid(a),
        Command::Verify(a) => commands::verify(a),
        Command::Solve(a) => commands::solve_cmd(a),
        Command::Evolve(a) => commands::evolve(a),
        Command::Psi(a) => commands::psi(a),
        Command::Kernel(a) => commands::kernel(a),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            let message = e.to_string().replace('\n', " ");
            eprintln!("error: {}: {message}", e.kind());
            ExitCode::from(2)
        }
    }
}
