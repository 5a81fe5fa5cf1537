//! Command-line front end for `rdhei-core`. Each pipeline step is a
//! subcommand; `bench` runs all of them over a directory of images.

pub mod args;
pub mod bench;
pub mod commands;
pub mod error;

pub use args::Cli;
pub use commands::run;
pub use error::CliError;
