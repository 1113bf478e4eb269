//! Exact computation of differential Galois groups of linear systems `Y' = A Y`
//! over `C(t)`, at desk scale.
//!
//! The arithmetic core in [`algebra`] is generic over a [`Field`]; the
//! algorithmic layers work over number fields and rational functions in `t`
//! and use the aliases below.

pub mod algebra;
pub mod bounds;
pub mod definable;
pub mod groups;
pub mod hyperexp;
pub mod ode;
pub mod pipeline;
pub mod radical;
pub mod relations;

pub use algebra::field::{Field, Rational};
pub use algebra::numfield::{Nf, NumberField};
pub use algebra::AlgebraError;

/// Univariate polynomials over Q.
pub type QPoly = algebra::poly::Poly<Rational>;
/// Univariate polynomials over the constant field.
pub type KPoly = algebra::poly::Poly<Nf>;
/// Elements of `k = C(t)`.
pub type KRat = algebra::ratfunc::RatFunc<Nf>;
/// Matrices over the constant field.
pub type CMatrix = algebra::linalg::Matrix<Nf>;
/// Matrices over `k`.
pub type KMatrix = algebra::linalg::Matrix<KRat>;
/// Polynomials in matrix entries with coefficients in `k`.
pub type KMultiPoly = algebra::multipoly::MultiPoly<KRat>;
/// Polynomials in matrix entries with constant coefficients.
pub type CMultiPoly = algebra::multipoly::MultiPoly<Nf>;

use thiserror::Error;

/// Errors from the algorithmic layers.
#[derive(Debug, Clone, Error)]
pub enum DgalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("t = {point} is a singular point: factor {factor} of the denominator vanishes")]
    Singular { point: String, factor: String },
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("truncation order {have} is too short; need at least {need}")]
    Margin { have: usize, need: usize },
    #[error("the proto-Galois degree bound is not executable at desk scale (pass an explicit degree); bound = {tower}")]
    BoundNotExecutable { tower: String },
}

impl DgalError {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, DgalError::Algebra(AlgebraError::ResourceCap(_)))
    }

    /// Prefix a stage name to the message, keeping the variant.
    pub fn in_stage(self, stage: &str) -> Self {
        match self {
            DgalError::Unsupported(m) => DgalError::Unsupported(format!("{stage}: {m}")),
            DgalError::Invalid(m) => DgalError::Invalid(format!("{stage}: {m}")),
            DgalError::Verification(m) => DgalError::Verification(format!("{stage}: {m}")),
            other => other,
        }
    }
}

pub type Result<T, E = DgalError> = std::result::Result<T, E>;
