//! Configuration, file formats and batch commands around `casimir-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

pub use config::RunConfig;
pub use error::CliError;
