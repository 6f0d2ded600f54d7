//! Command-line front end for etaspec.

pub mod args;
pub mod report;
pub mod run;

pub use run::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
