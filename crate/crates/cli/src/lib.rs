//! Library surface of the `slkvn` command-line tool: config parsing, the
//! expression interpreter for coefficient functions, command execution and
//! deterministic report rendering.

pub mod config;
pub mod expr;
pub mod report;
pub mod runner;

pub use config::{parse_config, parse_config_with_command, serialize, RunConfig};
pub use runner::{build_problem, run};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] slkvn_core::SlError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
