use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {allowed:e}")]
    NotHermitian { asymmetry: f64, allowed: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must be non-empty")]
    Empty,
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },
    #[error("site index ({a}, {b}) out of range for n = {n}")]
    IndexOutOfRange { a: usize, b: usize, n: usize },
    #[error("epsilon0 must be positive, got {0}")]
    ZeroEpsilon(f64),
    #[error("linear size must be even, got {0}")]
    OddSize(usize),
    #[error("size {got} is below the minimum {min}")]
    TooSmall { got: usize, min: usize },
    #[error("bond connects two sites of the same sublattice")]
    BrokenBipartiteness,
    #[error("gamma = {gamma} exceeds gamma_c = {gamma_c}: spectrum is not real")]
    BrokenPhase { gamma: f64, gamma_c: f64 },
    #[error("gamma = {gamma} lies outside 0 <= gamma <= gamma_c = {gamma_c}")]
    OutsideRegime { gamma: f64, gamma_c: f64 },
    #[error("fit window holds {got} bins, at least {min} required")]
    InsufficientBins { got: usize, min: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
