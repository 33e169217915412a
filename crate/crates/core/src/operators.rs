//! The synthesis operator `Q` and its adjoint `Q*`.
//!
//! Atom `k` is the sequence `a_k(t) = (Ω/π)·sinc(kπ + Ωt)`. `Q` maps weights
//! to the sequence `Σ_k y_k a_k(t)`; `Q*` maps a windowed sequence back to
//! the inner products `Σ_t a_k(t) z(t)`. Sums always run in ascending `k`
//! (for `Q`) and ascending `t` (for `Q*`) so results are bit-reproducible.

use crate::error::{CoreError, Result};
use crate::params::{BandParams, Coefficients, Window};
use crate::scalar::Scalar;
use crate::series::Series;
use crate::sinc::sinc;

/// `sinc(kπ + Ωt)`, without the `Ω/π` scale.
#[inline]
pub fn sinc_argument<T: Scalar>(omega: T, k: i64, t: i64) -> T {
    sinc(T::from_index(k) * T::PI() + omega * T::from_index(t))
}

/// Atom `a_k(t) = (Ω/π)·sinc(kπ + Ωt)`.
#[inline]
pub fn atom<T: Scalar>(params: &BandParams<T>, k: i64, t: i64) -> T {
    params.scale() * sinc_argument(params.omega, k, t)
}

/// `(Qy)(t) = (Ω/π) Σ_{k=-N}^{N} y_k sinc(kπ + Ωt)`.
pub fn apply_q<T: Scalar>(params: &BandParams<T>, coeffs: &Coefficients<T>, t: i64) -> T {
    debug_assert_eq!(coeffs.n_modes(), params.n_modes);
    let sum = coeffs
        .iter()
        .fold(T::zero(), |acc, (k, y)| acc + y * sinc_argument(params.omega, k, t));
    params.scale() * sum
}

/// `(Q*z)_k = (Ω/π) Σ_{t=q}^{s} sinc(kπ + Ωt) z(t)`.
pub fn apply_q_adjoint<T: Scalar>(
    params: &BandParams<T>,
    window: Window,
    data: &Series<T>,
) -> Result<Coefficients<T>> {
    let values = window_values(window, data)?;
    let scale = params.scale();
    let out = params
        .modes()
        .map(|k| {
            let sum = window
                .times()
                .zip(values)
                .fold(T::zero(), |acc, (t, &z)| {
                    acc + sinc_argument(params.omega, k, t) * z
                });
            scale * sum
        })
        .collect();
    Ok(Coefficients::from_vec_unchecked(params.n_modes, out))
}

/// Samples of `data` on the window, or `WindowNotCovered`.
pub(crate) fn window_values<T: Scalar>(window: Window, data: &Series<T>) -> Result<&[T]> {
    if !data.covers(window.q(), window.s()) {
        return Err(CoreError::WindowNotCovered {
            q: window.q(),
            s: window.s(),
            have_start: data.start_t(),
            have_end: data.end_t(),
        });
    }
    let lo = (window.q() - data.start_t()) as usize;
    Ok(&data.values()[lo..lo + window.len()])
}
