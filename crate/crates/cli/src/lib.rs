//! Command implementations behind the `polphase` binary.
//!
//! Every command renders its whole output to a `String` first, so the binary
//! only decides where the bytes go and which exit code to return.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use config::{ConfigFlags, Format, RunConfig};
pub use error::CliError;
