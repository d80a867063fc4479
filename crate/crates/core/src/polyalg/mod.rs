//! Exact coefficient fields, Laurent polynomials over them, and matrix
//! algebra over `F[t]` and `F[t^{+-1}]`.

mod elimination;
mod field;
mod laurent;
mod matrix;

use thiserror::Error;

pub use elimination::{
    hermite_normal_form, kernel_basis, rank_over_fraction_field, smith_normal_form, solve_in_span, HermiteForm,
    SnfResult,
};
pub use field::{CoefficientField, Scalar};
pub use laurent::{poly_arith, LaurentPoly, PolyOp};
pub use matrix::PolyMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("unknown coefficient field `{0}` (expected q or f<p>)")]
    UnknownField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(CoefficientField, CoefficientField),
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("operation requires entries in F[t]")]
    NotPolynomial,
    #[error("not in span")]
    NotInSpan,
}

impl serde::Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl serde::Serialize for CoefficientField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
