//! Command-line driver for `stabcover`: covering numbers, certificates,
//! lemma checks and catalog scans.

pub mod catalog;
pub mod certify;
pub mod commands;
pub mod scan;

pub use commands::{run, Cli, Command};
