use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("a tuple needs at least one state")]
    EmptyTuple,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("diagonal entry {index} is {value}, expected 1")]
    NonUnitDiagonal { index: usize, value: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("factor {index} has norm {norm:e} after truncation")]
    DegenerateFactor { index: usize, norm: f64 },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("{name} = {value} is outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),

    #[error("target {re} + {im}i lies outside the range (|z| = {modulus}, boundary radius {radius})")]
    OutsideRegion {
        re: f64,
        im: f64,
        modulus: f64,
        radius: f64,
    },

    #[error("invariant is zero (modulus {0:e}); its argument is undefined")]
    ZeroInvariant(f64),

    #[error("optimizer did not converge after {restarts} restarts (best residual {best_residual:e})")]
    NoConvergence { restarts: usize, best_residual: f64 },

    #[error("realization residual {residual:e} exceeds guarantee {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Format(String),
}
