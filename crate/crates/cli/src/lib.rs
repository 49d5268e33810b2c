//! Configuration, figure presets, sweep tables and self-verification behind
//! the `skyrelay` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod preset;
pub mod table;
pub mod verify;

pub use commands::Command;
pub use config::RunConfig;
pub use error::CliError;
pub use preset::Preset;
