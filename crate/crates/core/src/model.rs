//! Fitting `x̂ = Q (R + νI)⁻¹ Q* z` on a window and evaluating the result.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::gram::{build_gram, GramMatrix};
use crate::operators::{apply_q, sinc_argument, window_values};
use crate::params::{BandParams, Coefficients, Window};
use crate::scalar::Scalar;
use crate::series::Series;
use crate::solve::SpdFactor;

/// A factored Gram system for one `(params, window)` pair.
///
/// Building the plan is the `O(N²L)` part of a fit; every subsequent
/// [`fit`](FitPlan::fit) against new data on the same window only costs a
/// matrix-vector product and two triangular solves.
#[derive(Debug, Clone)]
pub struct FitPlan<T> {
    params: BandParams<T>,
    window: Window,
    gram: GramMatrix<T>,
    factor: SpdFactor<T>,
    // sinc(kπ + Ωt), row per mode, column per window time
    sinc_table: Vec<T>,
}

impl<T: Scalar> FitPlan<T> {
    pub fn new(params: BandParams<T>, window: Window) -> Result<Self> {
        params.validate()?;
        if !window.in_unique_regime(params.n_modes) {
            log::debug!(
                "window of length {} exceeds 2N+1 = {}; interpolant not unique",
                window.len(),
                params.dim()
            );
        }
        let gram = build_gram(&params, window);
        let factor = SpdFactor::factor(&gram, params.ridge)?;
        log::debug!(
            "fit plan: N = {}, window [{}, {}], ridge {:e}, pivot condition estimate {:e}",
            params.n_modes,
            window.q(),
            window.s(),
            params.ridge,
            factor.condition_estimate()
        );
        let sinc_table = params
            .modes()
            .flat_map(|k| window.times().map(move |t| sinc_argument(params.omega, k, t)))
            .collect();
        Ok(Self {
            params,
            window,
            gram,
            factor,
            sinc_table,
        })
    }

    pub fn params(&self) -> &BandParams<T> {
        &self.params
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn gram(&self) -> &GramMatrix<T> {
        &self.gram
    }

    pub fn condition_estimate(&self) -> T {
        self.factor.condition_estimate()
    }

    /// Fit against `data`, which must cover the plan's window.
    pub fn fit(&self, data: &Series<T>) -> Result<FittedExtrapolator<T>> {
        let values = window_values(self.window, data)?;
        self.fit_window_values(values)
    }

    /// Fit against the raw window samples `z(q), …, z(s)`.
    pub fn fit_window_values(&self, values: &[T]) -> Result<FittedExtrapolator<T>> {
        let len = self.window.len();
        if values.len() != len {
            return Err(CoreError::DimensionMismatch {
                expected: len,
                got: values.len(),
            });
        }
        let scale = self.params.scale();
        let rhs: Vec<T> = self
            .sinc_table
            .chunks_exact(len)
            .map(|row| {
                scale
                    * row
                        .iter()
                        .zip(values)
                        .fold(T::zero(), |acc, (&s, &z)| acc + s * z)
            })
            .collect();
        let coeffs = Coefficients::new(self.params.n_modes, self.factor.solve(&rhs))?;
        Ok(FittedExtrapolator::new(self.params, self.window, coeffs))
    }
}

/// Fit the regularized band-limited model to `data` on `window`.
pub fn fit<T: Scalar>(
    params: BandParams<T>,
    window: Window,
    data: &Series<T>,
) -> Result<FittedExtrapolator<T>> {
    FitPlan::new(params, window)?.fit(data)
}

/// Immutable fitted model, evaluable at every integer time.
///
/// On the window the value is the smoothed estimate; past `s` it is the
/// extrapolation. The two level shifts are added on `t ≤ s` and `t > s`
/// respectively and are zero unless set by
/// [`level_correct`](crate::preprocess::level_correct).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedExtrapolator<T> {
    params: BandParams<T>,
    window: Window,
    coeffs: Coefficients<T>,
    level_shift_history: T,
    level_shift_forecast: T,
}

impl<T: Scalar> FittedExtrapolator<T> {
    pub fn new(params: BandParams<T>, window: Window, coeffs: Coefficients<T>) -> Self {
        assert_eq!(coeffs.n_modes(), params.n_modes, "coefficient count must match params");
        Self {
            params,
            window,
            coeffs,
            level_shift_history: T::zero(),
            level_shift_forecast: T::zero(),
        }
    }

    pub fn params(&self) -> &BandParams<T> {
        &self.params
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn coeffs(&self) -> &Coefficients<T> {
        &self.coeffs
    }

    pub fn level_shift_history(&self) -> T {
        self.level_shift_history
    }

    pub fn level_shift_forecast(&self) -> T {
        self.level_shift_forecast
    }

    /// Copy with the given level shifts replacing the current ones.
    pub fn with_level_shifts(&self, history: T, forecast: T) -> Self {
        Self {
            level_shift_history: history,
            level_shift_forecast: forecast,
            ..self.clone()
        }
    }

    /// `(Qŷ)(t)` without any level shift.
    pub fn evaluate_unshifted(&self, t: i64) -> T {
        apply_q(&self.params, &self.coeffs, t)
    }

    pub fn evaluate(&self, t: i64) -> T {
        let shift = if t <= self.window.s() {
            self.level_shift_history
        } else {
            self.level_shift_forecast
        };
        self.evaluate_unshifted(t) + shift
    }

    /// Evaluations on `[from, to]` as a series.
    pub fn evaluate_range(&self, from: i64, to: i64) -> Series<T> {
        let values = (from..=to).map(|t| self.evaluate(t)).collect();
        Series::new(from, values).expect("finite coefficients give finite evaluations")
    }
}
