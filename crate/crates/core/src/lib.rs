//! Principal values and meromorphic extensions of `|f|^{2α} (log|f|²)^q f^{−N}`,
//! computed exactly where possible and numerically where not.
//!
//! The symbolic layer is generic over its coefficient field
//! ([`symbolic::DiffField`]) and the numeric evaluators over the scalar type
//! ([`scalar::Real`]); the aliases below fix the usual choices.

pub mod error;
pub mod quad;
pub mod regularize;
pub mod report;
pub mod scalar;
pub mod symbolic;
pub mod symfun;
pub mod testform;
pub mod weyl;

pub use error::{Error, Result};

/// Power–log expression with rational-function coefficients.
pub type Expr = symbolic::PowerLogExpr<symbolic::RatFn>;
/// Coefficient field on the smooth locus of the two-root map.
pub type SmoothExpr = symbolic::PowerLogExpr<symfun::Biradical>;
/// Test form compiled for double-precision evaluation.
pub type CompiledForm = testform::CompiledForm<f64>;
pub type Complex64 = num_complex::Complex<f64>;
