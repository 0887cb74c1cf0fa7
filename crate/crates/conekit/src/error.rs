use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },
    #[error("empty matrix or vector in {context}")]
    Empty { context: &'static str },
    #[error("generator matrix is numerically singular (sigma_min/sigma_max = {ratio:.3e})")]
    SingularGenerators { ratio: f64 },
    #[error("matrix is numerically singular")]
    Singular,
    #[error("{what} is not an interior point of the cone")]
    NotInterior { what: &'static str },
    #[error("operator does not map the cone into the cone; norm identity not claimed")]
    NotConePositive,
    #[error("dimension {dim} exceeds the guard {guard} for {context}")]
    GuardExceeded {
        context: &'static str,
        dim: usize,
        guard: usize,
    },
    #[error("linear program has {vars} variables, the dense-simplex guard is {guard}")]
    LpTooLarge { vars: usize, guard: usize },
    #[error("simplex did not terminate within {cap} pivots")]
    IterationCap { cap: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("lambda = {lambda} is numerically in the spectrum")]
    SpectrumHit { lambda: f64 },
    #[error("||tA|| = {norm:.3e} exceeds the matrix-exponential overflow guard {guard:.1e}")]
    ExpmOverflow { norm: f64, guard: f64 },
    #[error("lambda = {lambda} is not above the threshold {lambda0}")]
    NotAboveThreshold { lambda: f64, lambda0: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            got,
        });
    }
    Ok(())
}

pub(crate) fn check_finite_slice(context: &'static str, xs: &[f64]) -> Result<()> {
    if xs.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { context });
    }
    Ok(())
}
