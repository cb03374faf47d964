//! Differential-operator algebra and the Bernstein catalog.

pub mod catalog;
pub mod operator;

pub use catalog::{catalog, lookup, BernsteinDatum, Certificate};
pub use operator::DiffOperator;
