//! Batch front end: job files in, deterministic reports out.

pub mod group;
pub mod job;
pub mod report;
pub mod run;

pub use job::{Command, JobConfig, JobError, MatrixList};
pub use report::{verify_report, Report, REPORT_HEADER};
pub use run::{run, Outcome};

/// Exit status for a run whose checks all passed.
pub const EXIT_PASS: i32 = 0;
/// Exit status when a check failed or found no certificate.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for usage and input errors.
pub const EXIT_USAGE: i32 = 2;
