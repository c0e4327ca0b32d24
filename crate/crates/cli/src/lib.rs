//! Command-line front end for `planejump`: input loading and reports.

pub mod input;
pub mod report;

pub use input::{load, BranchFile, CliError, Loaded, Source};
