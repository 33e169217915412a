//! Moving-average stabilization and level correction of fitted models.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::model::FittedExtrapolator;
use crate::scalar::Scalar;
use crate::series::Series;

/// What the `(w-1)/2` points at each end of a moving average receive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryPolicy {
    /// Copy the nearest full-window average.
    #[default]
    ReplicateFirstFull,
    /// Average over whatever neighbours exist.
    ShrinkWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovingAverageConfig {
    pub width: usize,
    pub boundary: BoundaryPolicy,
}

impl Default for MovingAverageConfig {
    fn default() -> Self {
        Self {
            width: 5,
            boundary: BoundaryPolicy::ReplicateFirstFull,
        }
    }
}

impl MovingAverageConfig {
    pub fn new(width: usize, boundary: BoundaryPolicy) -> Result<Self> {
        let config = Self { width, boundary };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.width.is_multiple_of(2) {
            return Err(CoreError::InvalidConfig(format!(
                "moving average width must be odd and positive, got {}",
                self.width
            )));
        }
        Ok(())
    }
}

/// Centered moving average of odd width. Output has the input's start and length.
///
/// Each average is clamped to the range of the samples it covers, so the
/// result never leaves `[min, max]` of its window even after rounding.
pub fn moving_average<T: Scalar>(data: &Series<T>, config: &MovingAverageConfig) -> Result<Series<T>> {
    config.validate()?;
    let n = data.len();
    let w = config.width;
    if n < w {
        return Err(CoreError::SeriesTooShort {
            needed: w,
            available: n,
        });
    }
    let half = (w - 1) / 2;
    let z = data.values();
    let mean_of = |lo: usize, hi: usize| -> T {
        let window = &z[lo..=hi];
        let count = T::from_usize(window.len()).unwrap();
        let (min, max) = window
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(a, b), &v| (a.min(v), b.max(v)));
        let sum = window.iter().fold(T::zero(), |acc, &v| acc + v);
        (sum / count).max(min).min(max)
    };

    let mut out = vec![T::zero(); n];
    for (i, slot) in out.iter_mut().enumerate().take(n - half).skip(half) {
        *slot = mean_of(i - half, i + half);
    }
    match config.boundary {
        BoundaryPolicy::ReplicateFirstFull => {
            let first = out[half];
            let last = out[n - 1 - half];
            out[..half].fill(first);
            out[n - half..].fill(last);
        }
        BoundaryPolicy::ShrinkWindow => {
            for i in (0..half).chain(n - half..n) {
                let lo = i.saturating_sub(half);
                let hi = (i + half).min(n - 1);
                out[i] = mean_of(lo, hi);
            }
        }
    }
    Series::new(data.start_t(), out)
}

/// Constant added to the extrapolated part of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForecastShift {
    #[default]
    None,
    /// The moving average at the window end, `MV(s)`.
    LastMv,
    /// `mean(MV(s-4), …, MV(s))`.
    MeanLast5Mv,
}

/// Level correction applied after a fit. The historical rebase and the
/// forecast shift are independent and compose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LevelCorrection {
    /// Lift the on-window estimate by its mean absolute residual against the raw data.
    pub historical_rebase: bool,
    pub forecast: ForecastShift,
}

impl LevelCorrection {
    pub const NONE: Self = Self {
        historical_rebase: false,
        forecast: ForecastShift::None,
    };

    /// Historical rebase plus `MV(s)` on the forecast.
    pub const FIXED: Self = Self {
        historical_rebase: true,
        forecast: ForecastShift::LastMv,
    };

    pub fn is_none(&self) -> bool {
        *self == Self::NONE
    }
}

impl fmt::Display for LevelCorrection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.historical_rebase {
            parts.push("historical-rebase");
        }
        match self.forecast {
            ForecastShift::None => {}
            ForecastShift::LastMv => parts.push("last-mv"),
            ForecastShift::MeanLast5Mv => parts.push("mean-last-5-mv"),
        }
        if parts.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

impl FromStr for LevelCorrection {
    type Err = CoreError;

    /// Accepts `none`, `fixed`, or `+`-joined modes such as
    /// `historical-rebase+mean-last-5-mv`.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Self::NONE;
        for part in s.split('+').map(str::trim) {
            match part {
                "none" => {}
                "fixed" => out = Self::FIXED,
                "historical-rebase" => out.historical_rebase = true,
                "last-mv" | "mean-last-5-mv" if out.forecast != ForecastShift::None => {
                    return Err(CoreError::InvalidConfig(format!(
                        "correction '{s}' names more than one forecast shift"
                    )))
                }
                "last-mv" => out.forecast = ForecastShift::LastMv,
                "mean-last-5-mv" => out.forecast = ForecastShift::MeanLast5Mv,
                other => {
                    return Err(CoreError::InvalidConfig(format!(
                        "unknown correction mode '{other}'"
                    )))
                }
            }
        }
        Ok(out)
    }
}

/// Return a copy of `model` with level shifts computed from the data.
///
/// `history_mv` and `raw` are in the model's time frame. The historical
/// shift is `Σ_{t∈T} |raw(t) − x̂(t)| / L` using the unshifted estimate.
pub fn level_correct<T: Scalar>(
    model: &FittedExtrapolator<T>,
    history_mv: &Series<T>,
    raw: &Series<T>,
    correction: &LevelCorrection,
) -> Result<FittedExtrapolator<T>> {
    let window = model.window();
    let s = window.s();

    let history = if correction.historical_rebase {
        let raw_vals = raw.slice(window.q(), s)?;
        let total = raw_vals
            .iter()
            .fold(T::zero(), |acc, (t, z)| acc + (z - model.evaluate_unshifted(t)).abs());
        total / T::from_usize(window.len()).unwrap()
    } else {
        T::zero()
    };

    let forecast = match correction.forecast {
        ForecastShift::None => T::zero(),
        ForecastShift::LastMv => history_mv.slice(s, s)?.values()[0],
        ForecastShift::MeanLast5Mv => {
            let tail = history_mv.slice(s - 4, s)?;
            tail.values().iter().fold(T::zero(), |acc, &v| acc + v) / T::lit(5.0)
        }
    };

    Ok(model.with_level_shifts(history, forecast))
}
