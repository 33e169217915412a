use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::scalar::Scalar;

/// Frequency and regularization settings governing every operator.
///
/// `omega` is the band edge in radians per sample, `n_modes` the number `N`
/// of sinc atoms on each side of zero (so `2N + 1` coefficients), and `ridge`
/// the Tikhonov weight added to the Gram diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandParams<T> {
    pub omega: T,
    pub n_modes: usize,
    pub ridge: T,
}

impl<T: Scalar> BandParams<T> {
    pub fn new(omega: T, n_modes: usize, ridge: T) -> Result<Self> {
        let params = Self {
            omega,
            n_modes,
            ridge,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > T::zero() && self.omega < T::PI()) {
            return Err(CoreError::InvalidParams(format!(
                "omega must lie in (0, pi), got {}",
                self.omega
            )));
        }
        if self.n_modes == 0 {
            return Err(CoreError::InvalidParams("n_modes must be at least 1".into()));
        }
        if !self.ridge.is_finite() || self.ridge < T::zero() {
            return Err(CoreError::InvalidParams(format!(
                "ridge must be finite and non-negative, got {}",
                self.ridge
            )));
        }
        Ok(())
    }

    /// Number of coefficients, `2N + 1`.
    pub fn dim(&self) -> usize {
        2 * self.n_modes + 1
    }

    /// Mode indices `-N ..= N` in storage order.
    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let n = self.n_modes as i64;
        -n..=n
    }

    /// `Ω/π`, the scale in front of every sinc atom.
    pub fn scale(&self) -> T {
        self.omega / T::PI()
    }

    /// Period `π/Ω` when it is an integer, i.e. when atom `k` peaks on the
    /// sample grid at `t = -k·p`.
    pub fn integer_period(&self) -> Option<i64> {
        let p = T::PI() / self.omega;
        let r = p.round();
        if (p - r).abs() <= T::epsilon() * T::lit(16.0) * r {
            r.to_i64()
        } else {
            None
        }
    }

    pub fn with_ridge(self, ridge: T) -> Self {
        Self { ridge, ..self }
    }
}

/// Observation index range `{q, …, s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    q: i64,
    s: i64,
}

impl Window {
    pub fn new(q: i64, s: i64) -> Result<Self> {
        if q > s {
            return Err(CoreError::InvalidWindow { q, s });
        }
        Ok(Self { q, s })
    }

    /// The `len` points ending at `s`.
    pub fn ending_at(s: i64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(CoreError::InvalidConfig("window length must be at least 1".into()));
        }
        Self::new(s - len as i64 + 1, s)
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn len(&self) -> usize {
        (self.s - self.q + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, t: i64) -> bool {
        self.q <= t && t <= self.s
    }

    pub fn times(&self) -> std::ops::RangeInclusive<i64> {
        self.q..=self.s
    }

    /// Whether `L ≤ 2N + 1`, the regime in which the band-limited
    /// interpolant of the window is unique.
    pub fn in_unique_regime(&self, n_modes: usize) -> bool {
        self.len() <= 2 * n_modes + 1
    }
}

/// Sinc-series weights `y_k`, `k = -N ..= N`, stored in ascending `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficients<T> {
    n_modes: usize,
    values: Vec<T>,
}

impl<T: Scalar> Coefficients<T> {
    pub fn new(n_modes: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != 2 * n_modes + 1 {
            return Err(CoreError::DimensionMismatch {
                expected: 2 * n_modes + 1,
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite {
                t: i as i64 - n_modes as i64,
            });
        }
        Ok(Self { n_modes, values })
    }

    pub fn zeros(n_modes: usize) -> Self {
        Self {
            n_modes,
            values: vec![T::zero(); 2 * n_modes + 1],
        }
    }

    /// Vector with a single `1` at mode `k`.
    pub fn unit(n_modes: usize, k: i64) -> Self {
        let mut c = Self::zeros(n_modes);
        c.values[(k + n_modes as i64) as usize] = T::one();
        c
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Coefficient for mode `k`, `|k| ≤ N`.
    pub fn get(&self, k: i64) -> Option<T> {
        let idx = k + self.n_modes as i64;
        if idx < 0 {
            return None;
        }
        self.values.get(idx as usize).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        let n = self.n_modes as i64;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as i64 - n, v))
    }

    pub(crate) fn from_vec_unchecked(n_modes: usize, values: Vec<T>) -> Self {
        Self { n_modes, values }
    }
}
