//! Command-line front-end: argument definitions, the five commands and
//! their output files.

pub mod args;
pub mod compare;
pub mod counts;
pub mod error;
pub mod output;
pub mod predict;
pub mod simulate;

use std::path::PathBuf;

use sas_core::ExecMode;

pub use args::{Cli, Command};
pub use compare::run_compare;
pub use counts::{run_counts, run_cs_check};
pub use error::{CliError, CliResult, Failure};
pub use predict::run_predict;
pub use simulate::run_simulate;

/// Execution mode for `--workers`: 1 runs sequentially, more sizes the
/// global thread pool.
pub fn exec_for(workers: Option<usize>) -> CliResult<ExecMode> {
    match workers {
        Some(0) => Err(CliError::Usage("--workers must be >= 1".into())),
        Some(1) => Ok(ExecMode::Sequential),
        Some(_n) => {
            #[cfg(feature = "parallel")]
            {
                // a second configuration in the same process keeps the first pool
                let _ = rayon::ThreadPoolBuilder::new().num_threads(_n).build_global();
            }
            Ok(ExecMode::Parallel)
        }
        None => Ok(ExecMode::Parallel),
    }
}

/// Runs one parsed invocation and returns the files written.
pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let exec = exec_for(cli.workers)?;
    match &cli.command {
        Command::Predict(a) => {
            let report = run_predict(a, exec)?;
            if report.failures.is_empty() {
                Ok(report.files)
            } else {
                for f in &report.files {
                    println!("{}", f.display());
                }
                Err(CliError::Partial { failures: report.failures })
            }
        }
        Command::Simulate(a) => Ok(run_simulate(a, exec)?.files),
        Command::Counts(a) => Ok(run_counts(a, exec)?.files),
        Command::CsCheck(a) => Ok(run_cs_check(a, exec)?.files),
        Command::Compare(a) => {
            let report = run_compare(a, exec)?;
            println!(
                "{}: max |difference| {:.4} over {} points (tolerance {})",
                if report.summary.pass { "PASS" } else { "FAIL" },
                report.summary.max_abs_difference,
                report.summary.compared_points,
                report.config.tolerance
            );
            Ok(report.files)
        }
    }
}
