//! Verification harness behind the `dunkl-harmonics` binary.

pub mod config;
pub mod frozen;
pub mod report;
pub mod suites;

pub use config::{FixtureSource, RunConfig, Tolerances};
pub use report::{emit, parse_csv, OutputFormat, Record, Report, Summary, CSV_HEADER};
pub use suites::{run_suite, Suite};
