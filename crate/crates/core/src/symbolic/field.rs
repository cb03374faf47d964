//! Differential coefficient fields for [`PowerLogExpr`](super::expr::PowerLogExpr).
//!
//! A coefficient field is closed under the four operations and under
//! partial differentiation with respect to any variable of its universe.
//! Two implementations exist: rational functions ([`RatFn`]) and a single
//! adjoined square root over another field ([`SqrtExt`]); nesting the latter
//! gives the biradical fields needed on the smooth locus of the root map.

use std::fmt::{Debug, Display};

use num_complex::Complex;

use super::poly::Poly;
use super::rat::GaussRat;
use super::ring::RingRef;
use crate::error::Result;
use crate::scalar::Real;

pub use super::ratfn::RatFn;
pub use super::sqrtext::SqrtExt;

pub trait DiffField: Clone + Debug + Display + Send + Sync + Sized {
    fn ring(&self) -> &RingRef;

    /// Embeds a polynomial into the same field as `self` (same radicands).
    fn embed(&self, p: &Poly) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn deriv(&self, var: usize) -> Self;

    /// Numeric value; fails when a denominator is below `guard` in modulus.
    fn eval<T: Real>(&self, vals: &[Complex<T>], guard: f64) -> Result<Complex<T>>;

    /// Applies `lam -> lam + shift` to every coefficient.
    fn shift_lambda(&self, shift: &GaussRat) -> Self;

    /// Exact conjugation: holomorphic and anti-holomorphic variables swap,
    /// coefficients are conjugated, and each adjoined root is mirrored.
    fn conj(&self) -> Self;

    /// Root swap `sqrt(g) -> -sqrt(g)` applied to every adjoined radical.
    fn swap_roots(&self) -> Self;

    /// Multiplicatively reduced form suitable for display; arithmetic never depends on it.
    fn simplify(&self) -> Self {
        self.clone()
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn zero_like(&self) -> Self {
        self.embed(&Poly::zero(self.ring()))
    }

    fn one_like(&self) -> Self {
        self.embed(&Poly::one(self.ring()))
    }

    fn scalar(&self, c: &GaussRat) -> Self {
        self.embed(&Poly::constant(self.ring(), c.clone()))
    }

    fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.one_like();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }

    fn equals(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}
