use thiserror::Error;

/// Errors raised by the structural validators and table-driven utilities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("2S must be at least 1, got {0}")]
    InvalidSpin(u32),

    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    DimensionMismatch { expected: usize, rows: usize, cols: usize },

    #[error("expected {expected} {what}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix is not Hermitian: |m[{row}][{col}] - conj(m[{col}][{row}])| = {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("matrix does not commute with the total S_z: worst entry ({row}, {col}) has magnitude {magnitude:e}")]
    NotAxiallySymmetric { row: usize, col: usize, magnitude: f64 },

    #[error("not a valid A-state: {0}")]
    NotAState(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("no tabulated result for 2S = {0}")]
    NotTabulated(u32),

    #[error("temperature must be non-negative and finite, got {0}")]
    InvalidTemperature(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
