use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension {n} exceeds the supported maximum {max} for {what}")]
    Oversize { what: &'static str, n: usize, max: usize },

    #[error("compound of order {k} for n = {n} has {rows} rows, above the size cap {cap}")]
    SizeCap { n: usize, k: usize, rows: usize, cap: usize },

    #[error("shape mismatch: {0}x{0} against {1}x{1}")]
    ShapeMismatch(usize, usize),

    #[error("not a circulation: row {index} sums to {row_sum} but column {index} sums to {col_sum}")]
    NotCirculation { index: usize, row_sum: u64, col_sum: u64 },

    #[error("root finder did not converge (relative residual {residual:.3e})")]
    NonConvergence { residual: f64, best: Vec<Complex64> },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
