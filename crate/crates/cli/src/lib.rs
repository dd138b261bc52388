//! Library side of the `nhqc` command-line tool: config parsing, result
//! records and the four subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod record;

pub use commands::{cmd_check_holonomy, cmd_dfs, cmd_gate, cmd_sweep, Overrides};
pub use config::RunConfig;
pub use error::{CliError, Result};
pub use record::{Outputs, ResultRecord};
