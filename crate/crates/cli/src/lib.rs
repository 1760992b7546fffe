//! Command-line jobs over ideal functions and the two sandboxes, emitting
//! versioned JSON reports and SVG figures.
//!
//! Exit codes: 0 success, 2 a check failed, 3 a certificate is not exact
//! under `--require-exact`, 4 bad input or incompatible options.

pub mod args;
pub mod input;
pub mod jobs;
pub mod plot;
pub mod report;

pub use input::{IdealDoc, IdealSpec, InputError};
pub use jobs::{run, ExitStatus, Job, JobOptions, Outcome, Output, Suite, Verb};
pub use report::{report_schema, Body, Report, Status};

/// Environment variable naming the angle used when nothing else does.
pub const DEFAULT_ANGLE_VAR: &str = "ROTALG_DEFAULT_ANGLE";

/// Runs a job and writes its output to `path` or returns it for stdout.
pub fn execute(job: &Job, path: Option<&std::path::Path>) -> Result<(ExitStatus, Option<String>), InputError> {
    let outcome = run(job)?;
    let text = outcome.output.render();
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| InputError::Write { path: p.display().to_string(), message: e.to_string() })?;
            Ok((outcome.exit, None))
        }
        None => Ok((outcome.exit, Some(text))),
    }
}
