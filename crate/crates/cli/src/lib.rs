//! Library side of the `polycoreset` command-line tool: CSV formats, report
//! types and subcommand implementations.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;

pub use args::Cli;
pub use error::CliError;
