//! Causal band-limited smoothing and extrapolation of scalar time series.
//!
//! A window of observations `z(q), …, z(s)` is projected onto the span of
//! `2N + 1` shifted sinc atoms `a_k(t) = (Ω/π)·sinc(kπ + Ωt)` by the
//! Tikhonov-regularized least-squares fit
//!
//! ```text
//! ŷ = (R + νI)⁻¹ Q* z,      R = Q*Q,      x̂(t) = (Qŷ)(t)
//! ```
//!
//! The fitted sequence `x̂` is defined at every integer time: on the window it
//! is a smoothed version of the data, past `s` it is the forecast.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` / `*32` aliases below name the concrete instantiations.
//!
//! ```
//! use bandlimit_core::{fit, BandParams64, Series64, Window};
//!
//! let params = BandParams64::new(std::f64::consts::FRAC_PI_4, 10, 0.05).unwrap();
//! let window = Window::new(-20, 0).unwrap();
//! let data = Series64::new(-20, (0..21).map(|i| (i as f64 * 0.3).sin()).collect()).unwrap();
//! let model = fit(params, window, &data).unwrap();
//! let next = model.evaluate(1);
//! assert!(next.is_finite());
//! ```

pub mod baseline;
pub mod error;
pub mod gram;
pub mod model;
pub mod operators;
pub mod params;
pub mod preprocess;
pub mod scalar;
pub mod series;
pub mod sinc;
pub mod solve;

pub use baseline::{linear_forecast, LinearBaselineConfig};
pub use error::{CoreError, Result};
pub use gram::{build_gram, GramMatrix};
pub use model::{fit, FitPlan, FittedExtrapolator};
pub use operators::{apply_q, apply_q_adjoint, atom};
pub use params::{BandParams, Coefficients, Window};
pub use preprocess::{
    level_correct, moving_average, BoundaryPolicy, ForecastShift, LevelCorrection,
    MovingAverageConfig,
};
pub use scalar::Scalar;
pub use series::Series;
pub use sinc::sinc;
pub use solve::{tikhonov_solve, SpdFactor};

pub type BandParams64 = BandParams<f64>;
pub type Coefficients64 = Coefficients<f64>;
pub type Series64 = Series<f64>;
pub type GramMatrix64 = GramMatrix<f64>;
pub type FitPlan64 = FitPlan<f64>;
pub type FittedExtrapolator64 = FittedExtrapolator<f64>;

pub type BandParams32 = BandParams<f32>;
pub type Coefficients32 = Coefficients<f32>;
pub type Series32 = Series<f32>;
pub type GramMatrix32 = GramMatrix<f32>;
pub type FitPlan32 = FitPlan<f32>;
pub type FittedExtrapolator32 = FittedExtrapolator<f32>;
