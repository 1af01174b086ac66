//! Exact scalar and matrix arithmetic.

mod field;
mod form;
mod matrix;

pub use field::{is_irreducible, Field, FieldOp, FieldSpec, Involution, Scalar};
pub use form::{Anisotropy, HermitianForm};
pub(crate) use form::vector_from_code;
pub use matrix::{Matrix, Rref};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("Gram matrix is not hermitian")]
    NotHermitian,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("matrix is singular")]
    Singular,
}

pub(crate) fn dim_err(expected: impl ToString, found: impl ToString) -> AlgError {
    AlgError::DimensionMismatch { expected: expected.to_string(), found: found.to_string() }
}
