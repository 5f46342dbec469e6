//! Experiment harness: runs problem suites in several acting modes, trains
//! learned guidance, and summarizes results as tables.

pub mod cli;
pub mod commands;
pub mod error;
pub mod rows;
pub mod summary;

use cli::{Cli, Command};
use error::CliResult;

/// Runs a parsed command and returns what it prints.
pub fn dispatch(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Run(a) => {
            let out = commands::run::execute(a)?;
            Ok(format!(
                "{} rows written to {}\n\n{}",
                out.rows.len(),
                out.csv.display(),
                out.summary
            ))
        }
        Command::Train(a) => Ok(commands::train::execute(a)?.text),
        Command::Report(a) => commands::report::execute(a),
        Command::Gen(a) => {
            let paths = commands::gen::execute(a)?;
            Ok(paths.iter().map(|p| format!("{}\n", p.display())).collect())
        }
        Command::Validate(a) => commands::validate::execute(a),
    }
}
