//! Seeded experiment harness: sampling runs, moment and density comparisons,
//! discrepancy tables and spectrum dumps, emitted as [`RunRecord`]s.
//!
//! Sample `i` uses its own generator seeded with
//! [`derive_seed`](crate::rng::derive_seed)`(seed, i)` and results are
//! gathered in index order, so output does not depend on the worker count.

mod commands;
mod config;
mod output;
mod record;
mod summary;

pub use commands::{
    cmd_crossmoments, cmd_density, cmd_discrepancy, cmd_moments, cmd_sample, cmd_spectrum, run, KS_TOLERANCE,
    POISSONIZED_EXACT_MAX_N,
};
pub use config::{
    ExperimentConfig, OutputFormat, SampleMode, Subcommand, MAX_DISCREPANCY_N, MAX_MOMENT, MAX_SAMPLE_N,
};
pub use output::{render, to_csv, to_json, write_record, CSV_COLUMNS, RUN_RECORD_SCHEMA};
pub use record::{
    Centering, CenteringPolicy, Comparison, Histogram, MomentRow, RunRecord, SampleRow, Table, VERSION,
};
