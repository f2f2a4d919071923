//! File formats, seeded phantoms and the command-line front end for
//! [`naxray_core`].
//!
//! Every subcommand of the `naxray` binary is a thin wrapper over a function in
//! [`commands`], so a CLI round trip is the same code path as a library one.

pub mod cli;
pub mod commands;
pub mod error;
pub mod json;
pub mod phantom;
pub mod report;

pub use error::{CliError, CliResult};
