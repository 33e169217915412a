//! Experiment drivers for band-limited extrapolation: the Monte Carlo
//! benchmark, single-window forecasts, rolling backtests and the residual
//! reports used to compare against linear extrapolation.

pub mod error;
pub mod experiment;
pub mod metrics;
pub mod simulate;

pub use error::{HarnessError, Result};
pub use experiment::{
    run_rolling_forecast, run_single_forecast, BaselineSource, ExperimentConfig, Overlap,
    RollingForecast, SingleForecast, WindowForecast, WindowForecaster,
};
pub use metrics::{compare, residual_metrics, ComparisonReport, Metric, ResidualReport, Winner};
pub use simulate::{
    gen_path, run_trials, SimConfig, SmoothingScope, TrialAggregate, TrialOutcome, TrialRunner,
    PRNG_STREAM,
};
