//! Two-point linear extrapolation used as the comparison baseline.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::scalar::Scalar;
use crate::series::Series;

/// Lookback `A`: the secant runs from `t0 - A` to `t0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearBaselineConfig {
    pub lookback: usize,
}

impl LinearBaselineConfig {
    pub fn new(lookback: usize) -> Result<Self> {
        if lookback == 0 {
            return Err(CoreError::InvalidConfig("baseline lookback must be at least 1".into()));
        }
        Ok(Self { lookback })
    }
}

/// Predictions at `t0+1 ..= t0+horizon` on the line through
/// `(t0 - A, z(t0 - A))` and `(t0, z(t0))`, written as
/// `slope·t + (z(t0) - slope·t0)`.
pub fn linear_forecast<T: Scalar>(
    data: &Series<T>,
    t0: i64,
    config: &LinearBaselineConfig,
    horizon: usize,
) -> Result<Series<T>> {
    if config.lookback == 0 {
        return Err(CoreError::InvalidConfig("baseline lookback must be at least 1".into()));
    }
    if horizon == 0 {
        return Err(CoreError::InvalidConfig("forecast horizon must be at least 1".into()));
    }
    let lookback = config.lookback as i64;
    let (Some(end), Some(start)) = (data.get(t0), data.get(t0 - lookback)) else {
        return Err(CoreError::InsufficientHistory {
            needed_from: t0 - lookback,
            needed_to: t0,
        });
    };
    let slope = (end - start) / T::from_index(lookback);
    let intercept = end - slope * T::from_index(t0);
    let values = (1..=horizon as i64)
        .map(|h| slope * T::from_index(t0 + h) + intercept)
        .collect();
    Series::new(t0 + 1, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let z = Series::new(0, (0..=10).map(|t| 2.0 * t as f64 + 1.0).collect()).unwrap();
        let f = linear_forecast(&z, 10, &LinearBaselineConfig::new(5).unwrap(), 3).unwrap();
        assert_eq!(f.start_t(), 11);
        assert_eq!(f.values(), &[23.0, 25.0, 27.0]);
    }

    #[test]
    fn constant_series() {
        let z = Series::constant(1, 100, 42.5).unwrap();
        let f = linear_forecast(&z, 100, &LinearBaselineConfig::new(90).unwrap(), 4).unwrap();
        assert!(f.values().iter().all(|&v| v == 42.5));
    }

    #[test]
    fn insufficient_history() {
        let z = Series::constant(1, 10, 1.0).unwrap();
        let cfg = LinearBaselineConfig::new(10).unwrap();
        assert_eq!(
            linear_forecast(&z, 10, &cfg, 1).unwrap_err(),
            CoreError::InsufficientHistory { needed_from: 0, needed_to: 10 }
        );
        assert!(linear_forecast(&z, 11, &LinearBaselineConfig::new(1).unwrap(), 1).is_err());
    }

    #[test]
    fn rejects_degenerate_config() {
        assert!(LinearBaselineConfig::new(0).is_err());
        let z = Series::constant(1, 10, 1.0).unwrap();
        assert!(linear_forecast(&z, 10, &LinearBaselineConfig::new(2).unwrap(), 0).is_err());
    }

    #[test]
    fn shift_equivariance() {
        let z = Series::new(0, vec![3.0_f64, -1.0, 4.0, 1.0, -5.0, 9.0]).unwrap();
        let zc = z.map(|v| v + 100.0).unwrap();
        let cfg = LinearBaselineConfig::new(3).unwrap();
        let a = linear_forecast(&z, 5, &cfg, 4).unwrap();
        let b = linear_forecast(&zc, 5, &cfg, 4).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x + 100.0 - y).abs() < 1e-12);
        }
    }
}
