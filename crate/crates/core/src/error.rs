//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("generator count {n} exceeds the cap of {max}")]
    GeneratorCap { n: usize, max: usize },

    #[error("element is not invertible")]
    NotInvertible,

    #[error("transformation block is not orthogonal")]
    NotOrthogonal,

    #[error("eigenspace has infinite codimension (tail sign differs from the requested eigenvalue)")]
    InfiniteCodimension,

    #[error("subspace is not a complement of the eigenspace")]
    InvalidComplement,

    #[error("truncation {n} is too small for the witness window {window}")]
    WindowTooSmall { n: usize, window: usize },

    #[error("input vectors are linearly dependent")]
    DependentVectors,

    #[error("subspace dimension must be even, got {k}")]
    OddDimension { k: usize },

    #[error("operation requires the orthonormal form (all diagonal values 1)")]
    NonOrthonormalForm,

    #[error("quadratic form is degenerate: diagonal entry {index} is zero")]
    DegenerateForm { index: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code for diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division-by-zero",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::GeneratorCap { .. } => "generator-cap",
            Error::NotInvertible => "not-invertible",
            Error::NotOrthogonal => "not-orthogonal",
            Error::InfiniteCodimension => "infinite-codimension",
            Error::InvalidComplement => "invalid-complement",
            Error::WindowTooSmall { .. } => "window-too-small",
            Error::DependentVectors => "dependent-vectors",
            Error::OddDimension { .. } => "odd-dimension",
            Error::NonOrthonormalForm => "non-orthonormal-form",
            Error::DegenerateForm { .. } => "degenerate-form",
            Error::Parse(_) => "parse-error",
            Error::Internal(_) => "internal-invariant",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
