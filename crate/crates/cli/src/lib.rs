//! Command-line front end for `parrondo-core`.
//!
//! [`run`] parses arguments (after expanding any `--config` file), dispatches
//! to a subcommand and collects its report in a string. Errors carry the
//! process exit code: 0 success, 1 verification failure, 2 degenerate input,
//! 64 usage, 73 I/O.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod output;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use error::CliError;

use args::{Cli, Command};

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut String) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = config::expand_config(args.into_iter().map(Into::into).collect())?;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            out.push_str(&e.render().to_string());
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.render().to_string())),
    };
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a, out),
        Command::Quantize(q) => commands::quantize(q, out),
        Command::Verify(v) => commands::verify(v, out),
        Command::Simulate(s) => commands::simulate_cmd(s, out),
        Command::Sweep(s) => commands::sweep(s, out),
        Command::CompareFna(c) => commands::compare_fna(c, out),
    }
}
