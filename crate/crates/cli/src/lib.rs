//! Command-line front end: scenario files, reports and the subcommands of
//! the `sheafhist` binary.

pub mod commands;
pub mod error;
pub mod report;
pub mod scenario;

pub use commands::{execute, run, Command, RunOptions};
pub use error::CliError;
pub use report::Report;
pub use scenario::{load_scenario, parse_scenario, Scenario};
