//! Run reports: JSON documents that echo their configuration, and long-format
//! CSV plot data.

use std::fmt;
use std::str::FromStr;

use bandlimit_core::{BandParams64, MovingAverageConfig, Series64, Window};
use bandlimit_harness::{ComparisonReport, ExperimentConfig, ResidualReport, SimConfig, TrialAggregate};
use serde::{Deserialize, Serialize};

use crate::io::ColumnSpec;

/// Bumped whenever the report layout changes incompatibly.
pub const REPORT_FORMAT: &str = "blx-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format: String,
    pub version: String,
    pub config: RunConfig,
    #[serde(default)]
    pub reports: Vec<ResidualReport>,
    #[serde(default)]
    pub comparison: Option<ComparisonReport>,
    #[serde(default)]
    pub aggregate: Option<TrialAggregate>,
    /// Aligned series for plotting, in absolute time.
    #[serde(default)]
    pub series: Vec<NamedSeries>,
    /// Wall-clock cost; the only field not determined by `config`.
    #[serde(default)]
    pub timing: Option<Timing>,
}

impl RunReport {
    pub fn new(config: RunConfig) -> Self {
        Self {
            format: REPORT_FORMAT.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            reports: Vec::new(),
            comparison: None,
            aggregate: None,
            series: Vec::new(),
            timing: None,
        }
    }

    pub fn without_timing(&self) -> Self {
        Self {
            timing: None,
            ..self.clone()
        }
    }

    pub fn report(&self, method: &str) -> Option<&ResidualReport> {
        self.reports.iter().find(|r| r.method == method)
    }

    pub fn named_series(&self, name: &str) -> Option<&NamedSeries> {
        self.series.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    Simulate(SimulateConfig),
    Forecast(DataConfig),
    Backtest(DataConfig),
    Compare(CompareConfig),
}

impl RunConfig {
    pub fn command(&self) -> &'static str {
        match self {
            RunConfig::Simulate(_) => "simulate",
            RunConfig::Forecast(_) => "forecast",
            RunConfig::Backtest(_) => "backtest",
            RunConfig::Compare(_) => "compare",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub trials: usize,
    pub band: BandParams64,
    pub window: Window,
    pub horizon: usize,
    pub ma: MovingAverageConfig,
    pub sim: SimConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataConfig {
    pub input: InputEcho,
    pub experiment: ExperimentConfig,
}

/// Where the data came from, with a digest so a rerun can detect edits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub path: String,
    pub spec: ColumnSpec,
    /// Hex SHA-256 of the file bytes; filled in on first run.
    #[serde(default)]
    pub sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareConfig {
    pub first: String,
    pub second: String,
    pub first_method: String,
    pub second_method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedSeries {
    pub name: String,
    pub start_t: i64,
    pub values: Vec<f64>,
    /// Row labels from the input's date column, one per value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl NamedSeries {
    pub fn new(name: &str, series: &Series64) -> Self {
        Self {
            name: name.to_string(),
            start_t: series.start_t(),
            values: series.values().to_vec(),
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}' (expected json or csv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// JSON is one pretty-printed document whose key order follows the struct
/// layout. CSV is `series,t,value` rows for every named series.
pub fn emit_report(report: &RunReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("reports always serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(["series", "t", "value"]).expect("write to memory");
            for s in &report.series {
                for (t, v) in (s.start_t..).zip(&s.values) {
                    wtr.write_record([s.name.as_str(), &t.to_string(), &v.to_string()])
                        .expect("write to memory");
                }
            }
            wtr.into_inner().expect("flush to memory")
        }
    }
}

pub fn parse_report_json(bytes: &[u8]) -> serde_json::Result<RunReport> {
    serde_json::from_slice(bytes)
}

/// Read long-format plot CSV back into series, in first-seen order. Rows of
/// one series must have consecutive `t`.
pub fn parse_plot_csv(bytes: &[u8]) -> Result<Vec<NamedSeries>, String> {
    let mut rdr = csv::Reader::from_reader(bytes);
    let mut out: Vec<NamedSeries> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let row = i + 1;
        let (name, t, v) = match (rec.get(0), rec.get(1), rec.get(2)) {
            (Some(n), Some(t), Some(v)) => (n, t, v),
            _ => return Err(format!("row {row}: expected 3 fields")),
        };
        let t: i64 = t.parse().map_err(|_| format!("row {row}: bad t '{t}'"))?;
        let v: f64 = v.parse().map_err(|_| format!("row {row}: bad value '{v}'"))?;
        match out.iter_mut().find(|s| s.name == name) {
            Some(s) => {
                if t != s.start_t + s.values.len() as i64 {
                    return Err(format!("row {row}: t = {t} breaks series '{name}'"));
                }
                s.values.push(v);
            }
            None => out.push(NamedSeries {
                name: name.to_string(),
                start_t: t,
                values: vec![v],
                labels: None,
            }),
        }
    }
    Ok(out)
}
