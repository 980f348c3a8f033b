//! Front end of the `nsa` command: the shared s-expression DSL, the command
//! table and report formatting.

pub mod commands;
pub mod dsl;
pub mod report;

pub use commands::{run, Cli, CliError, Command};
pub use dsl::{parse_expr, parse_pred, parse_term_dsl, Parsed};
pub use report::Report;
