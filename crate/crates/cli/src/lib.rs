//! Command-line front end for the PKN engine: checking files, queries,
//! suppositions, Turtle export and an interactive session.

pub mod commands;
pub mod config;
pub mod repl;

pub use commands::{exit, CliError};
pub use config::{ConfigError, EngineConfig};
pub use repl::Repl;
