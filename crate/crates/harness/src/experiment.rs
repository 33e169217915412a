//! Single-window forecasts and rolling backtests against the linear baseline.
//!
//! Every window is fitted in a local time frame where its last observation
//! sits at `t = 0`, so one factored Gram system serves all repetitions. No fit
//! reads data past the end of its window: the moving average, the level
//! correction and the baseline all see only `data[..=s]`.

use bandlimit_core::{
    level_correct, linear_forecast, moving_average, BandParams64, FitPlan64,
    FittedExtrapolator64, LevelCorrection, LinearBaselineConfig, MovingAverageConfig, Series64,
    Window,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::metrics::{compare, residual_metrics, ComparisonReport, Metric, ResidualReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overlap {
    /// Each fit forecasts `horizon` days and emits all of them.
    None,
    /// Each fit forecasts `2·horizon` days and emits only the second half,
    /// discarding the drop-off right after the window.
    #[default]
    SkipFirstHorizon,
}

/// Which series the linear baseline draws its two anchor points from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineSource {
    #[default]
    Raw,
    MovingAverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub window_len: usize,
    pub horizon: usize,
    pub repetitions: usize,
    pub band: BandParams64,
    pub ma: MovingAverageConfig,
    pub correction: LevelCorrection,
    pub baseline: LinearBaselineConfig,
    #[serde(default)]
    pub baseline_source: BaselineSource,
    pub overlap: Overlap,
    #[serde(default)]
    pub metric: Metric,
    /// Emitted points excluded from the residual reports.
    #[serde(default)]
    pub burn_in: usize,
}

impl ExperimentConfig {
    /// `2N+1`-point window, one repetition, no overlap, no correction,
    /// 5-point moving average and a lookback of `2N` for the baseline.
    pub fn new(band: BandParams64, horizon: usize) -> Self {
        Self {
            window_len: band.dim(),
            horizon,
            repetitions: 1,
            band,
            ma: MovingAverageConfig::default(),
            correction: LevelCorrection::NONE,
            baseline: LinearBaselineConfig {
                lookback: band.dim() - 1,
            },
            baseline_source: BaselineSource::Raw,
            overlap: Overlap::None,
            metric: Metric::Abs,
            burn_in: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(HarnessError::InvalidConfig(msg.into()));
        if self.window_len == 0 {
            return bad("window_len must be at least 1");
        }
        if self.horizon == 0 {
            return bad("horizon must be at least 1");
        }
        if self.repetitions == 0 {
            return bad("repetitions must be at least 1");
        }
        if self.baseline.lookback == 0 {
            return bad("baseline lookback must be at least 1");
        }
        self.band.validate()?;
        self.ma.validate()?;
        Ok(())
    }

    /// Forecast steps evaluated past each window end.
    pub fn steps_per_fit(&self) -> usize {
        match self.overlap {
            Overlap::None => self.horizon,
            Overlap::SkipFirstHorizon => 2 * self.horizon,
        }
    }

    /// Points needed for a rolling run: window, emitted days and warm-up.
    pub fn required_len(&self) -> usize {
        self.window_len + (self.repetitions - 1) * self.horizon + self.steps_per_fit()
    }
}

/// A corrected fit of one window plus its forecast, in absolute time.
#[derive(Debug, Clone)]
pub struct WindowForecast {
    /// Last observation used.
    pub s: i64,
    /// Model in the window's local frame (`s` maps to 0).
    pub model: FittedExtrapolator64,
    /// Causal moving average on the window.
    pub mv: Series64,
    /// Corrected estimate on the window.
    pub smoothed: Series64,
    /// Corrected forecast at `s+1 ..= s+steps`.
    pub forecast: Series64,
    /// Baseline forecast at `s+1 ..= s+steps`.
    pub linear: Series64,
}

/// Fits windows of a fixed length ending anywhere in a series.
pub struct WindowForecaster {
    config: ExperimentConfig,
    plan: FitPlan64,
}

impl WindowForecaster {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let local = Window::ending_at(0, config.window_len)?;
        Ok(Self {
            plan: FitPlan64::new(config.band, local)?,
            config,
        })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    /// Fit the window ending at absolute time `s` and forecast `steps` points.
    pub fn forecast(&self, data: &Series64, s: i64, steps: usize) -> Result<WindowForecast> {
        let cfg = &self.config;
        let q = s - cfg.window_len as i64 + 1;
        if q < data.start_t() || s > data.end_t() {
            return Err(HarnessError::SeriesTooShort {
                needed: cfg.window_len,
                available: (s.min(data.end_t()) - data.start_t() + 1).max(0) as usize,
            });
        }
        // Nothing past s is visible from here on.
        let history = data.slice(data.start_t(), s)?;
        let mv = moving_average(&history, &cfg.ma)?;

        let mv_local = mv.reindexed(mv.start_t() - s);
        let raw_local = history.reindexed(history.start_t() - s);
        let model = self.plan.fit(&mv_local)?;
        let model = level_correct(&model, &mv_local, &raw_local, &cfg.correction)?;

        let smoothed = model
            .evaluate_range(-(cfg.window_len as i64) + 1, 0)
            .reindexed(q);
        let forecast = model.evaluate_range(1, steps as i64).reindexed(s + 1);

        let baseline_input = match cfg.baseline_source {
            BaselineSource::Raw => &history,
            BaselineSource::MovingAverage => &mv,
        };
        let linear = linear_forecast(baseline_input, s, &cfg.baseline, steps)?;

        Ok(WindowForecast {
            s,
            model,
            mv: mv.slice(q, s)?,
            smoothed,
            forecast,
            linear,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SingleForecast {
    pub forecast: Series64,
    pub actual: Series64,
    pub linear: Series64,
    pub smoothed: Series64,
    pub mv: Series64,
    /// Forecast residuals of the causal method.
    pub report: ResidualReport,
    /// On-window residuals of the corrected estimate against raw data.
    pub historical: ResidualReport,
    pub linear_report: ResidualReport,
    pub comparison: ComparisonReport,
    pub model: FittedExtrapolator64,
}

/// Fit on the first `window_len` points and forecast `horizon` points past them.
pub fn run_single_forecast(data: &Series64, config: &ExperimentConfig) -> Result<SingleForecast> {
    config.validate()?;
    let needed = config.window_len + config.horizon;
    if data.len() < needed {
        return Err(HarnessError::SeriesTooShort {
            needed,
            available: data.len(),
        });
    }
    let forecaster = WindowForecaster::new(*config)?;
    let s = data.start_t() + config.window_len as i64 - 1;
    let wf = forecaster.forecast(data, s, config.horizon)?;
    let actual = data.slice(s + 1, s + config.horizon as i64)?;
    let raw_window = data.slice(s - config.window_len as i64 + 1, s)?;

    let report = burned_report(&wf.forecast, &actual, config, "causal")?;
    let linear_report = burned_report(&wf.linear, &actual, config, "linear")?;
    let historical = residual_metrics(&wf.smoothed, &raw_window, config.metric)?.with_method("causal-historical");
    let comparison = compare(&report, &linear_report)?;
    Ok(SingleForecast {
        forecast: wf.forecast,
        actual,
        linear: wf.linear,
        smoothed: wf.smoothed,
        mv: wf.mv,
        report,
        historical,
        linear_report,
        comparison,
        model: wf.model,
    })
}

#[derive(Debug, Clone)]
pub struct RollingForecast {
    /// Emitted causal forecasts, one per day, contiguous.
    pub stitched: Series64,
    pub linear: Series64,
    pub actual: Series64,
    pub report: ResidualReport,
    pub linear_report: ResidualReport,
    pub comparison: ComparisonReport,
    /// Window end `s_i` of every repetition.
    pub fit_ends: Vec<i64>,
}

/// Repeated fit-and-forecast over windows ending at
/// `s_i = start + window_len - 1 + i·horizon`.
///
/// With [`Overlap::SkipFirstHorizon`] each fit forecasts `2·horizon` points and
/// emits points `horizon+1 ..= 2·horizon`, so the emitted days still tile the
/// series without gaps or repeats.
pub fn run_rolling_forecast(data: &Series64, config: &ExperimentConfig) -> Result<RollingForecast> {
    config.validate()?;
    let needed = config.required_len();
    if data.len() < needed {
        return Err(HarnessError::SeriesTooShort {
            needed,
            available: data.len(),
        });
    }
    let forecaster = WindowForecaster::new(*config)?;
    let h = config.horizon;
    let steps = config.steps_per_fit();
    let skip = steps - h;
    let first_end = data.start_t() + config.window_len as i64 - 1;
    let fit_ends: Vec<i64> = (0..config.repetitions)
        .map(|i| first_end + (i * h) as i64)
        .collect();

    let windows = fit_ends
        .par_iter()
        .map(|&s| forecaster.forecast(data, s, steps))
        .collect::<Result<Vec<_>>>()?;

    let mut stitched = Vec::with_capacity(config.repetitions * h);
    let mut linear = Vec::with_capacity(config.repetitions * h);
    for wf in &windows {
        stitched.extend_from_slice(&wf.forecast.values()[skip..]);
        linear.extend_from_slice(&wf.linear.values()[skip..]);
    }
    let start = first_end + 1 + skip as i64;
    let stitched = Series64::new(start, stitched)?;
    let linear = Series64::new(start, linear)?;
    let actual = data.slice(start, stitched.end_t())?;

    let report = burned_report(&stitched, &actual, config, "causal")?;
    let linear_report = burned_report(&linear, &actual, config, "linear")?;
    let comparison = compare(&report, &linear_report)?;
    Ok(RollingForecast {
        stitched,
        linear,
        actual,
        report,
        linear_report,
        comparison,
        fit_ends,
    })
}

fn burned_report(pred: &Series64, actual: &Series64, config: &ExperimentConfig, method: &str) -> Result<ResidualReport> {
    if config.burn_in >= pred.len() {
        return Err(HarnessError::InvalidConfig(format!(
            "burn-in of {} leaves no points out of {}",
            config.burn_in,
            pred.len()
        )));
    }
    let from = pred.start_t() + config.burn_in as i64;
    let pred = pred.slice(from, pred.end_t())?;
    let actual = actual.slice(from, actual.end_t())?;
    Ok(residual_metrics(&pred, &actual, config.metric)?.with_method(method))
}
