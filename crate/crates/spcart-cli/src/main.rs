//! Batch front end: fit a method on a dataset, compare methods across a
//! lambda sweep, verify performance bounds, or generate synthetic data.
//!
//! Exit codes: 0 success, 2 argument error, 3 data error, 4 numerical
//! degeneracy.

mod args;
mod commands;
mod output;

use clap::Parser;
use spcart::Error;

use crate::args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Fit(args) => commands::cmd_fit(args),
        Command::Compare(args) => commands::cmd_compare(args),
        Command::Bounds(args) => commands::cmd_bounds(args),
        Command::Synth(args) => commands::cmd_synth(args),
    };
    match outcome {
        Ok(paths) => {
            for path in paths {
                println!("wrote {}", path.display());
            }
        }
        Err(err) => {
            let (kind, code) = match &err {
                Error::InvalidArgument(_) => ("argument", 2),
                Error::InvalidInput(_) => ("data", 3),
                Error::DataIntegrity(_) => ("data", 3),
                Error::Io(_) => ("data", 3),
                Error::Degeneracy(_) => ("degeneracy", 4),
            };
            eprintln!("error: kind={kind} message={err}");
            std::process::exit(code);
        }
    }
}
