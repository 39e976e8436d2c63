use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("unsupported dimension {n}: {context}")]
    UnsupportedDimension { n: usize, context: &'static str },

    #[error("not bistochastic: {0}")]
    NotBistochastic(String),

    #[error("not unitary: residual {residual:e} exceeds tolerance {tolerance:e}")]
    NotUnitary { residual: f64, tolerance: f64 },

    #[error("zero pivot at ({row}, {col}): dephasing convention undefined")]
    ZeroPivot { row: usize, col: usize },

    #[error("index {index} out of range (must be < {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("ray parameter t = {t} leaves the polytope (admissible [{lo}, {hi}])")]
    OutOfPolytope { t: f64, lo: f64, hi: f64 },

    #[error("matrix is not unistochastic")]
    NotUnistochastic,

    #[error("phase system infeasible: L = {l} > 1")]
    Infeasible { l: f64 },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("matrix has no zero entry")]
    NoZeroEntry,

    #[error("non-finite value in input")]
    NonFinite,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),
}

pub type Result<T> = std::result::Result<T, Error>;
