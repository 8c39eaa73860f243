//! Library side of the `rigid-galois` command: run configuration, the
//! genericity protocol, the real-realization sampler and the subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod protocol;
pub mod sampler;

pub use config::RunConfig;
pub use error::{CliError, EXIT_CODES};
