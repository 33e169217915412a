//! Residual reports for forecast-versus-actual comparisons.

use std::fmt;

use bandlimit_core::Series64;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// `|pred - actual|`
    #[default]
    Abs,
    /// `(pred - actual)²`
    Squared,
}

impl Metric {
    pub fn apply(self, pred: f64, actual: f64) -> f64 {
        let d = pred - actual;
        match self {
            Metric::Abs => d.abs(),
            Metric::Squared => d * d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub method: String,
    pub metric: Metric,
    /// First forecast time covered by `per_point`.
    pub start_t: i64,
    pub per_point: Vec<f64>,
    pub total: f64,
    pub mean: f64,
    pub n_points: usize,
}

impl ResidualReport {
    pub fn with_method(mut self, method: impl Into<String>) -> Self {
        self.method = method.into();
        self
    }
}

/// Per-point residuals of `pred` against `actual`; both must cover the same times.
pub fn residual_metrics(pred: &Series64, actual: &Series64, metric: Metric) -> Result<ResidualReport> {
    if pred.len() != actual.len() || pred.start_t() != actual.start_t() || pred.is_empty() {
        return Err(HarnessError::LengthMismatch {
            pred: pred.len(),
            pred_start: pred.start_t(),
            actual: actual.len(),
            actual_start: actual.start_t(),
        });
    }
    let per_point: Vec<f64> = pred
        .values()
        .iter()
        .zip(actual.values())
        .map(|(&p, &a)| metric.apply(p, a))
        .collect();
    let total: f64 = per_point.iter().sum();
    let n_points = per_point.len();
    Ok(ResidualReport {
        method: String::new(),
        metric,
        start_t: pred.start_t(),
        per_point,
        total,
        mean: total / n_points as f64,
        n_points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    Causal,
    Linear,
    Tie,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Causal => "causal",
            Winner::Linear => "linear",
            Winner::Tie => "tie",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub causal: ResidualReport,
    pub linear: ResidualReport,
    pub winner: Winner,
    pub margin_per_point: f64,
}

/// The method with the strictly smaller mean wins.
pub fn compare(causal: &ResidualReport, linear: &ResidualReport) -> Result<ComparisonReport> {
    if causal.metric != linear.metric {
        return Err(HarnessError::IncomparableReports(format!(
            "metrics differ ({:?} vs {:?})",
            causal.metric, linear.metric
        )));
    }
    if causal.n_points != linear.n_points {
        return Err(HarnessError::IncomparableReports(format!(
            "point counts differ ({} vs {})",
            causal.n_points, linear.n_points
        )));
    }
    let winner = if causal.mean < linear.mean {
        Winner::Causal
    } else if linear.mean < causal.mean {
        Winner::Linear
    } else {
        Winner::Tie
    };
    Ok(ComparisonReport {
        causal: causal.clone(),
        linear: linear.clone(),
        winner,
        margin_per_point: (causal.mean - linear.mean).abs(),
    })
}
