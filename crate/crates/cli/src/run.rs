//! Executes a [`RunConfig`]. A rerun from an echoed config goes through the
//! same path as the original command.

use std::fs;
use std::path::Path;
use std::time::Instant;

use bandlimit_core::CoreError;
use bandlimit_harness::{
    compare, run_rolling_forecast, run_single_forecast, run_trials, HarnessError, Metric,
    ResidualReport,
};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::io::{load_series_from_reader, IoError, LoadedSeries};
use crate::report::{
    parse_report_json, CompareConfig, DataConfig, InputEcho, NamedSeries, RunConfig, RunReport,
    SimulateConfig, Timing,
};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or parameter values. Exit code 1.
    #[error("{0}")]
    Usage(String),
    /// Unreadable, malformed or insufficient input. Exit code 2.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::InvalidConfig(_)
            | HarnessError::Core(CoreError::InvalidParams(_))
            | HarnessError::Core(CoreError::InvalidConfig(_))
            | HarnessError::Core(CoreError::InvalidWindow { .. }) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        HarnessError::Core(e).into()
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Data(e.to_string())
    }
}

pub fn read_file(path: &str) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Data(format!("cannot read {path}: {e}")))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Run `config` and build its report. The returned config echo has the
/// input digest filled in.
pub fn execute(config: &RunConfig) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let mut report = match config {
        RunConfig::Simulate(c) => simulate(c)?,
        RunConfig::Forecast(c) => forecast(c)?,
        RunConfig::Backtest(c) => backtest(c)?,
        RunConfig::Compare(c) => compare_reports(c)?,
    };
    report.timing = Some(Timing {
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        threads: rayon::current_num_threads(),
    });
    Ok(report)
}

fn simulate(c: &SimulateConfig) -> Result<RunReport, CliError> {
    let agg = run_trials(c.trials, c.sim, c.band, c.window, c.horizon, c.ma)?;
    let start_t = c.window.s() + 1;
    let profile = |method: &str, metric, per_point: &[f64]| {
        let total: f64 = per_point.iter().sum();
        ResidualReport {
            method: method.to_string(),
            metric,
            start_t,
            per_point: per_point.to_vec(),
            total,
            mean: total / per_point.len() as f64,
            n_points: per_point.len(),
        }
    };
    let mut report = RunReport::new(RunConfig::Simulate(c.clone()));
    report.reports = vec![
        profile("causal", Metric::Abs, &agg.per_point_residuals),
        profile("causal", Metric::Squared, &agg.per_point_squared),
    ];
    for (name, values) in [("residual-profile", &agg.per_point_residuals), ("squared-profile", &agg.per_point_squared)] {
        report.series.push(NamedSeries {
            name: name.to_string(),
            start_t,
            values: values.clone(),
            labels: None,
        });
    }
    report.aggregate = Some(agg);
    Ok(report)
}

/// Load the input and check it against a digest recorded by an earlier run.
fn load_input(input: &InputEcho) -> Result<(LoadedSeries, InputEcho), CliError> {
    let bytes = read_file(&input.path)?;
    let digest = sha256_hex(&bytes);
    if let Some(recorded) = &input.sha256 {
        if *recorded != digest {
            return Err(CliError::Data(format!(
                "{} has changed since the report was made (sha256 {digest}, recorded {recorded})",
                input.path
            )));
        }
    }
    let loaded = load_series_from_reader(bytes.as_slice(), &input.spec)?;
    let echo = InputEcho {
        sha256: Some(digest),
        ..input.clone()
    };
    Ok((loaded, echo))
}

fn raw_series(loaded: &LoadedSeries) -> NamedSeries {
    let raw = NamedSeries::new("raw", &loaded.series);
    match &loaded.dates {
        Some(dates) => raw.with_labels(dates.clone()),
        None => raw,
    }
}

fn forecast(c: &DataConfig) -> Result<RunReport, CliError> {
    c.experiment.validate()?;
    let (loaded, input) = load_input(&c.input)?;
    let out = run_single_forecast(&loaded.series, &c.experiment)?;
    let mut report = RunReport::new(RunConfig::Forecast(DataConfig {
        input,
        experiment: c.experiment,
    }));
    report.reports = vec![out.report, out.linear_report, out.historical];
    report.comparison = Some(out.comparison);
    report.series = vec![
        raw_series(&loaded),
        NamedSeries::new("mv", &out.mv),
        NamedSeries::new("smoothed", &out.smoothed),
        NamedSeries::new("forecast", &out.forecast),
        NamedSeries::new("linear", &out.linear),
        NamedSeries::new("actual", &out.actual),
    ];
    Ok(report)
}

fn backtest(c: &DataConfig) -> Result<RunReport, CliError> {
    c.experiment.validate()?;
    let (loaded, input) = load_input(&c.input)?;
    let out = run_rolling_forecast(&loaded.series, &c.experiment)?;
    let mut report = RunReport::new(RunConfig::Backtest(DataConfig {
        input,
        experiment: c.experiment,
    }));
    report.reports = vec![out.report, out.linear_report];
    report.comparison = Some(out.comparison);
    report.series = vec![
        raw_series(&loaded),
        NamedSeries::new("forecast", &out.stitched),
        NamedSeries::new("linear", &out.linear),
        NamedSeries::new("actual", &out.actual),
    ];
    Ok(report)
}

fn load_report(path: &str) -> Result<RunReport, CliError> {
    let bytes = read_file(path)?;
    parse_report_json(&bytes).map_err(|e| CliError::Data(format!("{path} is not a report: {e}")))
}

fn pick(report: &RunReport, path: &str, method: &str) -> Result<ResidualReport, CliError> {
    // Simulate reports carry abs and squared profiles under one label.
    report
        .reports
        .iter()
        .find(|r| r.method == method && r.metric == Metric::Abs)
        .or_else(|| report.report(method))
        .cloned()
        .ok_or_else(|| CliError::Data(format!("{path} has no '{method}' report")))
}

fn compare_reports(c: &CompareConfig) -> Result<RunReport, CliError> {
    let a = pick(&load_report(&c.first)?, &c.first, &c.first_method)?;
    let b = pick(&load_report(&c.second)?, &c.second, &c.second_method)?;
    let comparison = compare(&a, &b).map_err(|e| CliError::Data(e.to_string()))?;
    let mut report = RunReport::new(RunConfig::Compare(c.clone()));
    report.reports = vec![a, b];
    report.comparison = Some(comparison);
    Ok(report)
}

/// The config echoed in a report file, for `rerun`.
pub fn config_from_report_file(path: &Path) -> Result<RunConfig, CliError> {
    Ok(load_report(&path.display().to_string())?.config)
}
