use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::scalar::Scalar;

/// A finite run of samples indexed by absolute integer time.
///
/// Sample `i` of `values` sits at time `start_t + i`. All values are finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series<T> {
    start_t: i64,
    values: Vec<T>,
}

impl<T: Scalar> Series<T> {
    pub fn new(start_t: i64, values: Vec<T>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite {
                t: start_t + i as i64,
            });
        }
        Ok(Self { start_t, values })
    }

    /// Constant series, mostly useful in tests.
    pub fn constant(start_t: i64, len: usize, value: T) -> Result<Self> {
        Self::new(start_t, vec![value; len])
    }

    pub fn start_t(&self) -> i64 {
        self.start_t
    }

    /// Last covered time. For an empty series this is `start_t - 1`.
    pub fn end_t(&self) -> i64 {
        self.start_t + self.values.len() as i64 - 1
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

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn covers(&self, from: i64, to: i64) -> bool {
        from <= to && from >= self.start_t && to <= self.end_t()
    }

    pub fn get(&self, t: i64) -> Option<T> {
        if t < self.start_t {
            return None;
        }
        self.values.get((t - self.start_t) as usize).copied()
    }

    /// Iterator over `(t, value)` pairs in ascending time.
    pub fn iter(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start_t + i as i64, v))
    }

    /// Copy of the samples on `[from, to]`, keeping absolute times.
    pub fn slice(&self, from: i64, to: i64) -> Result<Self> {
        if !self.covers(from, to) {
            return Err(CoreError::WindowNotCovered {
                q: from,
                s: to,
                have_start: self.start_t,
                have_end: self.end_t(),
            });
        }
        let lo = (from - self.start_t) as usize;
        let hi = (to - self.start_t) as usize;
        Ok(Self {
            start_t: from,
            values: self.values[lo..=hi].to_vec(),
        })
    }

    /// Same samples, relabelled so the first one sits at `start_t`.
    pub fn reindexed(&self, start_t: i64) -> Self {
        Self {
            start_t,
            values: self.values.clone(),
        }
    }

    /// Elementwise `f(value)`; the result must stay finite.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(self.start_t, self.values.iter().map(|&v| f(v)).collect())
    }
}
