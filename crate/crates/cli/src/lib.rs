//! Command-line front end: CSV ingestion, experiment subcommands and
//! JSON / CSV report emission.

pub mod cli;
pub mod io;
pub mod report;
pub mod run;

pub use cli::{cli_main, parse_omega, THREADS_ENV};
pub use io::{load_series_csv, load_series_from_reader, ColumnRef, ColumnSpec, IoError, LoadedSeries};
pub use report::{
    emit_report, parse_plot_csv, parse_report_json, CompareConfig, DataConfig, Format, InputEcho,
    NamedSeries, RunConfig, RunReport, SimulateConfig, Timing, REPORT_FORMAT,
};
pub use run::{execute, sha256_hex, CliError};
