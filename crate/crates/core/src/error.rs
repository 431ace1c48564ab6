use num_complex::Complex64;
use thiserror::Error;

use crate::polyalg::MultiIndex;

/// Errors raised by the polydisc computations.
///
/// Negative answers of the algorithms (a failed necessary condition, a
/// central completion of too high a degree) are reported through the
/// returned reports, not through this type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate {index} is zero but the symbol has a negative exponent there")]
    ZeroCoordinate { index: usize },

    #[error("negative exponent {0} where an ordinary polynomial is required")]
    NegativeExponent(MultiIndex),

    #[error("grid with {points} points per axis cannot resolve band {band}")]
    GridTooSmall { points: usize, band: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("polynomial has nonzero constant term {0}")]
    NonzeroConstant(Complex64),

    #[error("index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("exponent {exponent} of symbol p_{k} is not the image of any index tuple")]
    NotInImage { k: usize, exponent: MultiIndex },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("eigenvalue {0:e} lies below the clamping tolerance")]
    NegativeEigenvalue(f64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{what} is not a contraction (norm {norm})")]
    NotContraction { what: &'static str, norm: f64 },

    #[error("factor equation is inconsistent (residual {0:e})")]
    InconsistentFactor(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
