//! Deterministic factorization of sparse multivariate polynomials of bounded
//! individual degree over finite fields.

pub mod bifactor;
pub mod cli;
pub mod error;
pub mod factorizer;
pub mod field;
pub mod hitting;
pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod resultant;
pub mod sparsepoly;
pub mod unifactor;
pub mod unipoly;

pub use error::{Error, RejectReason, Result};
pub use field::{make_field, Field, FieldCtx, FieldElem};
pub use sparsepoly::SparsePoly;
pub use unipoly::UniPoly;

/// Exact rational scalar used by the polytope LPs.
pub type Rational = num_rational::BigRational;
