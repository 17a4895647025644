//! Orchestration behind the `mdim` binary: input sources, resolved job specs, the
//! published-table report and the self-test suites.

pub mod commands;
pub mod error;
pub mod job;
pub mod selftest;
pub mod sources;
pub mod table;

pub use error::{CliResult, Failure};
pub use job::{Globals, JobSpec};
