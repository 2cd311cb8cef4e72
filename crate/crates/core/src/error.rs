use thiserror::Error;

pub type Result<T, E = FermiError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FermiError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode count {n} outside 1..={max}")]
    ModeCountOutOfRange { n: usize, max: usize },

    #[error("matrix is not antisymmetric (‖A + Aᵀ‖ = {residual:.3e})")]
    NotAntisymmetric { residual: f64 },

    #[error("matrix is not skew-adjoint (‖s + s*‖ = {residual:.3e})")]
    NotSkewAdjoint { residual: f64 },

    #[error("element has odd components; it does not preserve the 2n-dimensional representation")]
    OutsideEvenSubalgebra,

    #[error("element is not in the real form of the algebra{detail}")]
    NotRealForm { detail: String },

    #[error("singular {what}")]
    Singular { what: &'static str },

    #[error("1 - Λ'Λ is not invertible (smallest singular value {min_singular_value:.3e})")]
    SingularCrossing { min_singular_value: f64 },

    #[error("exceptional value b = {re} + {im}i (|b + 2| below threshold)")]
    ExceptionalB { re: f64, im: f64 },

    #[error("decomposition obstructed at factor {step}: {cause}")]
    DecompositionObstruction { step: usize, cause: Box<FermiError> },

    #[error("square-root branch is ambiguous: determinant path passes near zero at t = {t}")]
    BranchAmbiguity { t: f64 },

    #[error("matrix logarithm undefined: {reason}")]
    LogarithmUndefined { reason: String },

    #[error("invalid mode indices: {0}")]
    InvalidIndices(String),
}
