//! Exact symbolic layer: Gaussian rationals, polynomials over variable
//! universes, differential coefficient fields and power–log expressions.

pub mod expr;
pub mod field;
mod parse;
pub mod poly;
pub mod rat;
pub mod ratfn;
pub mod ring;
pub mod roots;
pub mod sqrtext;

pub use expr::{Exponent, LogSymbol, PowerLogExpr, Side};
pub use field::DiffField;
pub use poly::Poly;
pub use rat::{GaussRat, Rat};
pub use ratfn::RatFn;
pub use ring::{Ring, RingRef, VarKind};
pub use sqrtext::SqrtExt;
