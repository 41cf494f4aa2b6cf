//! Command-line surface: argument parsing, configuration resolution, and
//! summary-table aggregation of comparison results.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error.

pub mod commands;
pub mod config;
pub mod render;
pub mod report;

pub use commands::{execute, Cli, CommandError};
pub use report::{aggregate, compare, AggregateSummary, ComparisonReport, ReportError};

use clap::error::ErrorKind;
use clap::Parser;

/// Parses `argv` and runs the selected subcommand, returning the process
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!(
                "{}",
                serde_json::json!({"level": "error", "message": err.to_string()})
            );
            1
        }
    }
}
