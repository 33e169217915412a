use thiserror::Error;

/// Errors raised by the band-limited operators and the preprocessing helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("invalid band parameters: {0}")]
    InvalidParams(String),

    #[error("invalid window [{q}, {s}]: q must not exceed s")]
    InvalidWindow { q: i64, s: i64 },

    #[error("series covering [{have_start}, {have_end}] does not span window [{q}, {s}]")]
    WindowNotCovered {
        q: i64,
        s: i64,
        have_start: i64,
        have_end: i64,
    },

    #[error("system is singular at pivot {pivot} (value {value:e}); supply a positive ridge")]
    SingularSystem { pivot: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value at t = {t}")]
    NonFinite { t: i64 },

    #[error("series too short: need at least {needed} points, have {available}")]
    SeriesTooShort { needed: usize, available: usize },

    #[error("insufficient history: need data on [{needed_from}, {needed_to}]")]
    InsufficientHistory { needed_from: i64, needed_to: i64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
