use bandlimit_core::CoreError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("series too short: need {needed} points, have {available}")]
    SeriesTooShort { needed: usize, available: usize },

    #[error("length mismatch: predictions cover {pred} points from t = {pred_start}, actuals {actual} points from t = {actual_start}")]
    LengthMismatch {
        pred: usize,
        pred_start: i64,
        actual: usize,
        actual_start: i64,
    },

    #[error("reports are not comparable: {0}")]
    IncomparableReports(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
