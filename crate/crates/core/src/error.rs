use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix deviates from Hermitian symmetry by {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },
    #[error("eigensolver failed to converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("index {index} out of range [1, {max}]")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("operator is not a quantum state: {reason}")]
    NotAState { reason: String },
    #[error("eigenvalue {value:e} below the PSD clamping threshold")]
    NotPositiveSemidefinite { value: f64 },
    #[error("simplex pivot cap of {cap} exceeded")]
    PivotCapExceeded { cap: usize },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("alignment rhs {value} is not integral")]
    NonIntegralRhs { value: f64 },
    #[error("alignment table entry ({l1},{l2}) = {value} violates its bounds [{lo}, {hi}]")]
    AlignmentOutOfBounds {
        l1: usize,
        l2: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("staggered bound: slackness precondition fails (m = {m})")]
    SlacknessAbsent { m: i64 },
    #[error("staggered bound: staggered index {index} exceeds dimension {d}")]
    StaggeredIndexOverflow { index: usize, d: usize },
    #[error("subset pair is infeasible")]
    InfeasiblePair,
    #[error("index set is not downward closed in the product order")]
    NotDownwardClosed,
    #[error("negative eigenvalue {value:e} in tensor factor spectrum")]
    NegativeEigenvalue { value: f64 },
    #[error("invalid probability vector: {reason}")]
    InvalidProbability { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
