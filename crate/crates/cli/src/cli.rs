//! Argument parsing and the `blx` entry point.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bandlimit_core::{
    BandParams64, BoundaryPolicy, LevelCorrection, LinearBaselineConfig, MovingAverageConfig,
    Window,
};
use bandlimit_harness::{
    BaselineSource, ExperimentConfig, Metric, Overlap, SimConfig, SmoothingScope,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::io::{ColumnRef, ColumnSpec};
use crate::report::{
    emit_report, CompareConfig, DataConfig, Format, InputEcho, RunConfig, RunReport,
    SimulateConfig,
};
use crate::run::{config_from_report_file, execute, CliError};

/// Environment variable capping the worker threads used for trials and windows.
pub const THREADS_ENV: &str = "BLX_THREADS";

#[derive(Debug, Parser)]
#[command(name = "blx", version, about = "Band-limited smoothing and extrapolation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo benchmark on random-coefficient autoregressive paths.
    Simulate(SimulateArgs),
    /// Fit one window and forecast past its end.
    Forecast(ForecastArgs),
    /// Rolling repeated forecasts over a series.
    Backtest(BacktestArgs),
    /// Compare residual reports from two report files.
    Compare(CompareArgs),
    /// Rerun the configuration echoed in a report.
    Rerun(RerunArgs),
}

#[derive(Debug, Args)]
struct BandArgs {
    /// Half the number of sinc modes, N.
    #[arg(long, default_value_t = 45)]
    n_modes: usize,
    /// Band limit Ω: a decimal, `pi`, `pi/4`, `2*pi/3`, ...
    #[arg(long, default_value = "pi/4", value_parser = parse_omega)]
    omega: f64,
    /// Moving-average width.
    #[arg(long, default_value_t = 5)]
    ma_width: usize,
    #[arg(long, value_enum, default_value_t = BoundaryArg::ReplicateFirstFull)]
    boundary: BoundaryArg,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Report file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format of the report written to --out or standard output.
    #[arg(long, default_value = "json")]
    format: Format,
    /// Also write plot data as long-format CSV.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[command(flatten)]
    band: BandArgs,
    /// Tikhonov ridge ν.
    #[arg(long, default_value_t = 0.05)]
    ridge: f64,
    #[arg(long, default_value_t = 20)]
    horizon: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Noise scale σ.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    sigma: f64,
    /// Initial value z(0).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    z0: f64,
    /// Lower bound of the uniform AR coefficient.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    coeff_low: f64,
    /// Upper bound of the uniform AR coefficient.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    coeff_high: f64,
    #[arg(long, value_enum, default_value_t = ScopeArg::FullPath)]
    smoothing_scope: ScopeArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct DataArgs {
    /// CSV file with one numeric column to model.
    #[arg(long)]
    input: PathBuf,
    /// Value column: header name or 0-based index.
    #[arg(long)]
    column: String,
    /// Treat the first row as data rather than a header.
    #[arg(long)]
    no_header: bool,
    /// Column carried through to the plot data as row labels.
    #[arg(long)]
    date_column: Option<String>,
    /// Fit window length; defaults to 2N+1.
    #[arg(long)]
    window: Option<usize>,
    #[command(flatten)]
    band: BandArgs,
    /// Tikhonov ridge ν.
    #[arg(long, default_value_t = 0.1)]
    ridge: f64,
    /// Linear baseline lookback A; defaults to 2N.
    #[arg(long)]
    baseline: Option<usize>,
    #[arg(long, value_enum, default_value_t = BaselineSourceArg::Raw)]
    baseline_source: BaselineSourceArg,
    #[arg(long, value_enum, default_value_t = MetricArg::Abs)]
    metric: MetricArg,
    /// Leading forecast days left out of the residual reports.
    #[arg(long, default_value_t = 0)]
    burn_in: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ForecastArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 20)]
    horizon: usize,
    /// `none`, `fixed`, or modes joined by `+`: historical-rebase, last-mv, mean-last-5-mv.
    #[arg(long, default_value = "fixed")]
    correction: LevelCorrection,
}

#[derive(Debug, Args)]
struct BacktestArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 5)]
    horizon: usize,
    #[arg(long, default_value = "historical-rebase+mean-last-5-mv")]
    correction: LevelCorrection,
    #[arg(long, default_value_t = 32)]
    repetitions: usize,
    #[arg(long, value_enum, default_value_t = OverlapArg::SkipFirstHorizon)]
    overlap: OverlapArg,
}

#[derive(Debug, Args)]
struct CompareArgs {
    first: PathBuf,
    second: PathBuf,
    /// Method label taken from the first report.
    #[arg(long, default_value = "causal")]
    first_method: String,
    /// Method label taken from the second report.
    #[arg(long, default_value = "linear")]
    second_method: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RerunArgs {
    report: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoundaryArg {
    ReplicateFirstFull,
    ShrinkWindow,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    FullPath,
    HistoryOnly,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OverlapArg {
    None,
    SkipFirstHorizon,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BaselineSourceArg {
    Raw,
    MovingAverage,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Abs,
    Squared,
}

/// Parse a band limit: a decimal literal, or `pi` optionally scaled as
/// `pi/d`, `c*pi`, `c*pi/d`.
pub fn parse_omega(text: &str) -> Result<f64, String> {
    let s = text.trim().to_ascii_lowercase();
    let value = if let Ok(v) = s.parse::<f64>() {
        v
    } else {
        let (numer, denom) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s.as_str(), None),
        };
        let coeff = match numer.strip_suffix("pi").map(str::trim) {
            Some("") => 1.0,
            Some(c) => c
                .strip_suffix('*')
                .and_then(|c| c.trim().parse::<f64>().ok())
                .ok_or_else(|| format!("cannot parse omega '{text}'"))?,
            None => return Err(format!("cannot parse omega '{text}'")),
        };
        let denom = match denom {
            Some(d) => d.parse::<f64>().map_err(|_| format!("cannot parse omega '{text}'"))?,
            None => 1.0,
        };
        coeff * std::f64::consts::PI / denom
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(format!("omega must be positive and finite, got '{text}'"))
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

impl BandArgs {
    fn band(&self, ridge: f64) -> Result<BandParams64, CliError> {
        BandParams64::new(self.omega, self.n_modes, ridge).map_err(usage)
    }

    fn ma(&self) -> Result<MovingAverageConfig, CliError> {
        let boundary = match self.boundary {
            BoundaryArg::ReplicateFirstFull => BoundaryPolicy::ReplicateFirstFull,
            BoundaryArg::ShrinkWindow => BoundaryPolicy::ShrinkWindow,
        };
        MovingAverageConfig::new(self.ma_width, boundary).map_err(usage)
    }
}

impl SimulateArgs {
    fn config(&self) -> Result<RunConfig, CliError> {
        let band = self.band.band(self.ridge)?;
        let window = Window::ending_at(0, band.dim()).map_err(usage)?;
        let sim = SimConfig {
            sigma: self.sigma,
            coeff_low: self.coeff_low,
            coeff_high: self.coeff_high,
            z0: self.z0,
            path_length: window.len() + self.horizon,
            seed: self.seed,
            smoothing_scope: match self.smoothing_scope {
                ScopeArg::FullPath => SmoothingScope::FullPath,
                ScopeArg::HistoryOnly => SmoothingScope::HistoryOnly,
            },
        };
        sim.validate().map_err(usage)?;
        Ok(RunConfig::Simulate(SimulateConfig {
            trials: self.trials,
            band,
            window,
            horizon: self.horizon,
            ma: self.band.ma()?,
            sim,
        }))
    }
}

impl DataArgs {
    fn config(&self, horizon: usize, correction: LevelCorrection, tweak: impl FnOnce(&mut ExperimentConfig)) -> Result<DataConfig, CliError> {
        let band = self.band.band(self.ridge)?;
        let mut experiment = ExperimentConfig::new(band, horizon);
        experiment.ma = self.band.ma()?;
        experiment.correction = correction;
        if let Some(w) = self.window {
            experiment.window_len = w;
        }
        if let Some(a) = self.baseline {
            experiment.baseline = LinearBaselineConfig { lookback: a };
        }
        experiment.baseline_source = match self.baseline_source {
            BaselineSourceArg::Raw => BaselineSource::Raw,
            BaselineSourceArg::MovingAverage => BaselineSource::MovingAverage,
        };
        experiment.metric = match self.metric {
            MetricArg::Abs => Metric::Abs,
            MetricArg::Squared => Metric::Squared,
        };
        experiment.burn_in = self.burn_in;
        tweak(&mut experiment);
        experiment.validate().map_err(usage)?;

        let column: ColumnRef = self.column.parse().expect("infallible");
        Ok(DataConfig {
            input: InputEcho {
                path: self.input.display().to_string(),
                spec: ColumnSpec {
                    column,
                    skip_header: !self.no_header,
                    date_column: self.date_column.as_deref().map(|c| c.parse().expect("infallible")),
                },
                sha256: None,
            },
            experiment,
        })
    }
}

fn write_outputs(report: &RunReport, output: &OutputArgs) -> Result<(), CliError> {
    let write = |path: &Path, bytes: &[u8]| {
        fs::write(path, bytes).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
    };
    let bytes = emit_report(report, output.format);
    match &output.out {
        Some(path) => write(path, &bytes)?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Data(format!("cannot write to standard output: {e}")))?,
    }
    if let Some(path) = &output.plot {
        write(path, &emit_report(report, Format::Csv))?;
    }
    Ok(())
}

fn summarize(report: &RunReport) {
    if let Some(agg) = &report.aggregate {
        eprintln!(
            "{} trials: extrapolation {:.4} per point, smoothing {:.4} per point",
            agg.n_trials, agg.extrap_per_point, agg.smoothing_per_point
        );
    }
    if let Some(c) = &report.comparison {
        eprintln!(
            "{} mean {:.4} vs {} mean {:.4} over {} points: {} by {:.4}",
            c.causal.method, c.causal.mean, c.linear.method, c.linear.mean, c.causal.n_points, c.winner, c.margin_per_point
        );
    }
}

/// Cap the global rayon pool from `BLX_THREADS` if set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
        // Already initialized, e.g. when called twice in one process.
        log::debug!("thread pool not reconfigured: {e}");
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (config, output) = match cli.command {
        Command::Simulate(a) => (a.config()?, a.output),
        Command::Forecast(a) => {
            let cfg = a.data.config(a.horizon, a.correction, |_| {})?;
            (RunConfig::Forecast(cfg), a.data.output)
        }
        Command::Backtest(a) => {
            let overlap = match a.overlap {
                OverlapArg::None => Overlap::None,
                OverlapArg::SkipFirstHorizon => Overlap::SkipFirstHorizon,
            };
            let cfg = a.data.config(a.horizon, a.correction, |e| {
                e.repetitions = a.repetitions;
                e.overlap = overlap;
            })?;
            (RunConfig::Backtest(cfg), a.data.output)
        }
        Command::Compare(a) => (
            RunConfig::Compare(CompareConfig {
                first: a.first.display().to_string(),
                second: a.second.display().to_string(),
                first_method: a.first_method,
                second_method: a.second_method,
            }),
            a.output,
        ),
        Command::Rerun(a) => (config_from_report_file(&a.report)?, a.output),
    };
    log::info!("running {}", config.command());
    let report = execute(&config)?;
    summarize(&report);
    write_outputs(&report, &output)
}

/// Run `blx` with `argv` (program name first) and return the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
