//! Config ingestion, command dispatch and report rendering for the `klrw` binary.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{primary_param, run_command, run_tasks, Settings, COMMANDS, COVERAGE};
pub use config::{parse_config, ConfigError, Task, WorkbenchConfig};
pub use report::{render, structured_block, Report, Status};
