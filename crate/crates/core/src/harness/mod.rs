//! Experiment orchestration behind the command-line tool.

pub mod config;
pub mod counts;
pub mod experiments;
pub mod output;
pub mod profiles;
pub mod run;

pub use config::{InitKind, RawConfig, RunConfig};
pub use counts::{format_counts, verify_counts, CountRow, REFERENCE_COUNTS};
pub use experiments::{
    compare, format_compare, format_verdicts, parse_verdicts, run_parallel, sweep_eps, write_compare_charts, CompareCell,
    SweepReport,
};
pub use output::{csv_header, CsvSink, RunRecord};
pub use profiles::{profile, Profile};
pub use run::{run_solver, solve, RunHooks, RunOutput, RunPaths, RunSummary};

/// Environment variable holding the number of parallel worker slots.
pub const WORKERS_ENV: &str = "IESL_WORKERS";

/// Worker slots from [`WORKERS_ENV`], else the available parallelism.
pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
