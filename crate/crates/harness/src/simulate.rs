//! Monte Carlo evaluation on the random-coefficient autoregression
//! `z(t) = A(t) z(t-1) + σ η(t)`, `A(t) ~ U(low, high)`, `η(t) ~ N(0, 1)`.

use bandlimit_core::{
    moving_average, BandParams64, FitPlan64, MovingAverageConfig, Series64, Window,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Identifies the random stream behind [`gen_path`]. Golden fixtures record
/// it; a change here invalidates them.
pub const PRNG_STREAM: &str = "chacha20/seed_from_u64/rand-0.9/uniform-then-standard-normal/v1";

/// Which samples the moving average sees before the fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothingScope {
    /// Smooth the whole generated path, so averages near `s` include the
    /// first points past the window.
    #[default]
    FullPath,
    /// Smooth only the window; strictly causal.
    HistoryOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub sigma: f64,
    pub coeff_low: f64,
    pub coeff_high: f64,
    pub z0: f64,
    pub path_length: usize,
    pub seed: u64,
    #[serde(default)]
    pub smoothing_scope: SmoothingScope,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            coeff_low: 0.0,
            coeff_high: 1.0,
            z0: 1.0,
            path_length: 111,
            seed: 42,
            smoothing_scope: SmoothingScope::FullPath,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::InvalidConfig(msg));
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma must be finite and non-negative, got {}", self.sigma));
        }
        if !self.coeff_low.is_finite() || !self.coeff_high.is_finite() || self.coeff_low > self.coeff_high {
            return bad(format!(
                "coefficient support [{}, {}] is not a finite interval",
                self.coeff_low, self.coeff_high
            ));
        }
        if !self.z0.is_finite() {
            return bad("z0 must be finite".into());
        }
        if self.path_length == 0 {
            return bad("path_length must be at least 1".into());
        }
        Ok(())
    }
}

/// One path of `path_length` samples starting at `t = 1`.
///
/// Each step draws one uniform for `A(t)` and then one standard normal for
/// `η(t)` from a ChaCha20 stream seeded with `config.seed`.
pub fn gen_path(config: &SimConfig) -> Result<Series64> {
    config.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let span = config.coeff_high - config.coeff_low;
    let mut prev = config.z0;
    let mut values = Vec::with_capacity(config.path_length);
    for _ in 0..config.path_length {
        let a = config.coeff_low + span * rng.random::<f64>();
        let eta: f64 = rng.sample(StandardNormal);
        prev = a * prev + config.sigma * eta;
        values.push(prev);
    }
    Ok(Series64::new(1, values)?)
}

/// Residuals of a single trial against the raw path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub extrap_abs: Vec<f64>,
    pub extrap_squared: Vec<f64>,
    pub smoothing_abs: f64,
    pub smoothing_squared: f64,
}

/// Means over trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialAggregate {
    /// Mean `|x̂(s+h) - z(s+h)|` for `h = 1 ..= horizon`.
    pub per_point_residuals: Vec<f64>,
    /// Mean `(x̂(s+h) - z(s+h))²`.
    pub per_point_squared: Vec<f64>,
    /// Mean over trials of `Σ_{t∈T} |x̂(t) - z(t)|`.
    pub smoothing_total: f64,
    pub smoothing_per_point: f64,
    pub smoothing_squared_per_point: f64,
    /// Mean over trials of `Σ_h |x̂(s+h) - z(s+h)|`.
    pub extrap_total: f64,
    pub extrap_per_point: f64,
    pub n_trials: usize,
}

impl TrialAggregate {
    /// Reduce outcomes in slice order.
    pub fn from_outcomes(outcomes: &[TrialOutcome], window_len: usize) -> Result<Self> {
        let Some(first) = outcomes.first() else {
            return Err(HarnessError::InvalidConfig("at least one trial is required".into()));
        };
        let horizon = first.extrap_abs.len();
        let n = outcomes.len() as f64;
        let mut abs = vec![0.0; horizon];
        let mut sq = vec![0.0; horizon];
        let mut smooth = 0.0;
        let mut smooth_sq = 0.0;
        for o in outcomes {
            for (acc, v) in abs.iter_mut().zip(&o.extrap_abs) {
                *acc += v;
            }
            for (acc, v) in sq.iter_mut().zip(&o.extrap_squared) {
                *acc += v;
            }
            smooth += o.smoothing_abs;
            smooth_sq += o.smoothing_squared;
        }
        abs.iter_mut().chain(sq.iter_mut()).for_each(|v| *v /= n);
        let smoothing_total = smooth / n;
        let extrap_total: f64 = abs.iter().sum();
        Ok(Self {
            smoothing_total,
            smoothing_per_point: smoothing_total / window_len as f64,
            smoothing_squared_per_point: smooth_sq / n / window_len as f64,
            extrap_total,
            extrap_per_point: extrap_total / horizon as f64,
            per_point_residuals: abs,
            per_point_squared: sq,
            n_trials: outcomes.len(),
        })
    }
}

/// Everything a trial needs besides its index; the Gram system is factored once.
pub struct TrialRunner {
    sim: SimConfig,
    plan: FitPlan64,
    horizon: usize,
    ma: MovingAverageConfig,
}

impl TrialRunner {
    pub fn new(
        sim: SimConfig,
        band: BandParams64,
        window: Window,
        horizon: usize,
        ma: MovingAverageConfig,
    ) -> Result<Self> {
        sim.validate()?;
        ma.validate()?;
        if horizon == 0 {
            return Err(HarnessError::InvalidConfig("horizon must be at least 1".into()));
        }
        if window.len() != band.dim() {
            return Err(HarnessError::InvalidConfig(format!(
                "trial window length {} must equal 2N+1 = {}",
                window.len(),
                band.dim()
            )));
        }
        let sim = SimConfig {
            path_length: window.len() + horizon,
            ..sim
        };
        Ok(Self {
            sim,
            plan: FitPlan64::new(band, window)?,
            horizon,
            ma,
        })
    }

    /// Trial `index` uses seed `sim.seed ^ index`.
    pub fn run(&self, index: u64) -> Result<TrialOutcome> {
        let window = self.plan.window();
        let cfg = SimConfig {
            seed: self.sim.seed ^ index,
            ..self.sim
        };
        let path = gen_path(&cfg)?.reindexed(window.q());
        let mv = match self.sim.smoothing_scope {
            SmoothingScope::FullPath => moving_average(&path, &self.ma)?,
            SmoothingScope::HistoryOnly => moving_average(&path.slice(window.q(), window.s())?, &self.ma)?,
        };
        let model = self.plan.fit(&mv)?;

        let (mut smoothing_abs, mut smoothing_squared) = (0.0, 0.0);
        for t in window.times() {
            let d = model.evaluate(t) - path.get(t).unwrap();
            smoothing_abs += d.abs();
            smoothing_squared += d * d;
        }
        let (mut extrap_abs, mut extrap_squared) = (Vec::with_capacity(self.horizon), Vec::with_capacity(self.horizon));
        for h in 1..=self.horizon as i64 {
            let t = window.s() + h;
            let d = model.evaluate(t) - path.get(t).unwrap();
            extrap_abs.push(d.abs());
            extrap_squared.push(d * d);
        }
        Ok(TrialOutcome {
            extrap_abs,
            extrap_squared,
            smoothing_abs,
            smoothing_squared,
        })
    }
}

/// Run `n_trials` independent trials and average their residuals.
///
/// Trials run in parallel on the current rayon pool; outcomes are reduced in
/// trial-index order, so the aggregate does not depend on scheduling.
pub fn run_trials(
    n_trials: usize,
    sim: SimConfig,
    band: BandParams64,
    window: Window,
    horizon: usize,
    ma: MovingAverageConfig,
) -> Result<TrialAggregate> {
    if n_trials == 0 {
        return Err(HarnessError::InvalidConfig("at least one trial is required".into()));
    }
    let runner = TrialRunner::new(sim, band, window, horizon, ma)?;
    let outcomes = (0..n_trials as u64)
        .into_par_iter()
        .map(|i| runner.run(i))
        .collect::<Result<Vec<_>>>()?;
    TrialAggregate::from_outcomes(&outcomes, window.len())
}
