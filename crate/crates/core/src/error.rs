use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by every module. Failures are always explicit; no
/// operation silently degrades its answer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("coefficient table too short: need index {needed}, have {have}")]
    TableTooShort { needed: usize, have: usize },

    #[error("tau table request {requested} exceeds configured cap {cap}")]
    TauCapExceeded { requested: usize, cap: usize },

    #[error("quadrature budget exceeded: {panels} panels, last refinement diff {last_diff:e}")]
    QuadBudgetExceeded { panels: usize, last_diff: f64 },

    #[error("enumeration budget exceeded: {tuples} tuples (cap {cap})")]
    EnumBudgetExceeded { tuples: u64, cap: u64 },

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("gcd({a}, {c}) != 1")]
    NotCoprime { a: i64, c: i64 },

    #[error("operation is not defined for this form: {0}")]
    UnsupportedForm(String),

    #[error("argument {y} below oscillatory-split threshold {y_min}")]
    BelowSplitThreshold { y: f64, y_min: f64 },

    #[error("no sign change of the phase derivative on the support")]
    NoStationaryPoint,

    #[error("derivative changes sign on the interval")]
    DerivativeSignChange,

    #[error("interval too long: {len} > {cap}")]
    IntervalTooLong { len: u64, cap: u64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("bad cache file: {0}")]
    BadCache(String),
}
