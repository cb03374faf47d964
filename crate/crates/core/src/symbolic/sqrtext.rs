//! A single adjoined square root `K(sqrt(g))` over a differential field `K`.

use std::fmt;

use num_complex::Complex;

use super::field::DiffField;
use super::poly::Poly;
use super::rat::GaussRat;
use super::ring::RingRef;
use crate::error::Result;
use crate::scalar::Real;

/// `u + v·sqrt(g)`; `g` must not be a square in `K`, which makes
/// `(u, v)` a unique representation and `is_zero` exact.
///
/// `anti` selects the numeric branch: the principal square root for a
/// holomorphic radicand, its mirror `conj(sqrt(conj g))` for an
/// anti-holomorphic one, so that conjugate roots evaluate to conjugate values.
#[derive(Clone)]
pub struct SqrtExt<K: DiffField> {
    pub u: K,
    pub v: K,
    g: K,
    anti: bool,
}

impl<K: DiffField> SqrtExt<K> {
    pub fn new(u: K, v: K, g: K, anti: bool) -> Self {
        SqrtExt { u, v, g, anti }
    }

    /// `sqrt(g)` itself.
    pub fn root(g: K, anti: bool) -> Self {
        SqrtExt { u: g.zero_like(), v: g.one_like(), g, anti }
    }

    /// Lifts a base-field element.
    pub fn lift(&self, k: K) -> Self {
        SqrtExt { u: k, v: self.g.zero_like(), g: self.g.clone(), anti: self.anti }
    }

    pub fn radicand(&self) -> &K {
        &self.g
    }

    pub fn is_anti(&self) -> bool {
        self.anti
    }

    /// True when the radical part vanishes.
    pub fn in_base(&self) -> bool {
        self.v.is_zero()
    }

    fn with(&self, u: K, v: K) -> Self {
        SqrtExt { u, v, g: self.g.clone(), anti: self.anti }
    }
}

impl<K: DiffField> DiffField for SqrtExt<K> {
    fn ring(&self) -> &RingRef {
        self.g.ring()
    }

    fn embed(&self, p: &Poly) -> Self {
        self.with(self.g.embed(p), self.g.zero_like())
    }

    fn add(&self, o: &Self) -> Self {
        self.with(self.u.add(&o.u), self.v.add(&o.v))
    }

    fn mul(&self, o: &Self) -> Self {
        let uu = self.u.mul(&o.u);
        let vv = if self.v.is_zero() || o.v.is_zero() {
            self.g.zero_like()
        } else {
            self.v.mul(&o.v).mul(&self.g)
        };
        let uv = if o.v.is_zero() { self.g.zero_like() } else { self.u.mul(&o.v) };
        let vu = if self.v.is_zero() { self.g.zero_like() } else { self.v.mul(&o.u) };
        self.with(uu.add(&vv), uv.add(&vu))
    }

    fn neg(&self) -> Self {
        self.with(self.u.neg(), self.v.neg())
    }

    fn inv(&self) -> Option<Self> {
        if self.v.is_zero() {
            return Some(self.with(self.u.inv()?, self.g.zero_like()));
        }
        // (u - v√g) / (u² - v² g)
        let norm = self.u.mul(&self.u).sub(&self.v.mul(&self.v).mul(&self.g));
        let ninv = norm.inv()?;
        Some(self.with(self.u.mul(&ninv), self.v.neg().mul(&ninv)))
    }

    fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    fn deriv(&self, var: usize) -> Self {
        // d(v√g) = dv·√g + v·dg/(2g)·√g
        let du = self.u.deriv(var);
        let dv = self.v.deriv(var);
        let dg = self.g.deriv(var);
        let extra = if self.v.is_zero() || dg.is_zero() {
            self.g.zero_like()
        } else {
            let two_g = self.g.add(&self.g);
            self.v.mul(&dg).mul(&two_g.inv().expect("radicand is nonzero"))
        };
        self.with(du, dv.add(&extra))
    }

    fn eval<T: Real>(&self, vals: &[Complex<T>], guard: f64) -> Result<Complex<T>> {
        let u = self.u.eval(vals, guard)?;
        if self.v.is_zero() {
            return Ok(u);
        }
        let v = self.v.eval(vals, guard)?;
        let g = self.g.eval(vals, guard)?;
        let r = if self.anti { g.conj().sqrt().conj() } else { g.sqrt() };
        Ok(u + v * r)
    }

    fn shift_lambda(&self, shift: &GaussRat) -> Self {
        SqrtExt {
            u: self.u.shift_lambda(shift),
            v: self.v.shift_lambda(shift),
            g: self.g.shift_lambda(shift),
            anti: self.anti,
        }
    }

    fn conj(&self) -> Self {
        SqrtExt { u: self.u.conj(), v: self.v.conj(), g: self.g.conj(), anti: !self.anti }
    }

    fn swap_roots(&self) -> Self {
        SqrtExt {
            u: self.u.swap_roots(),
            v: self.v.swap_roots().neg(),
            g: self.g.clone(),
            anti: self.anti,
        }
    }

    fn simplify(&self) -> Self {
        self.with(self.u.simplify(), self.v.simplify())
    }
}

impl<K: DiffField> fmt::Display for SqrtExt<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            write!(f, "{}", self.u)
        } else {
            write!(f, "[{}] + [{}]*sqrt({})", self.u, self.v, self.g)
        }
    }
}

impl<K: DiffField> fmt::Debug for SqrtExt<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::field::RatFn;
    use crate::symbolic::ring::Ring;

    fn setup() -> (RingRef, SqrtExt<RatFn>) {
        let r = Ring::complex_pairs(&["s1".into(), "s2".into()]);
        let s1 = Poly::var(&r, 0);
        let s2 = Poly::var(&r, 1);
        let delta = &s1.pow(2) - &s2.scale(&GaussRat::int(4));
        (r, SqrtExt::root(RatFn::from_poly(delta), false))
    }

    #[test]
    fn root_squares_to_radicand() {
        let (_, sq) = setup();
        let p = sq.mul(&sq);
        assert!(p.in_base());
        assert!(p.u.equals(sq.radicand()));
    }

    #[test]
    fn derivative_of_root() {
        let (r, sq) = setup();
        // d/ds1 sqrt(Δ) = s1 / sqrt(Δ)
        let d = sq.deriv(0);
        let expect = sq.embed(&Poly::var(&r, 0)).mul(&sq.inv().unwrap());
        assert!(d.equals(&expect));
    }

    #[test]
    fn swap_is_involutive_and_kills_odd_part() {
        let (r, sq) = setup();
        let x = sq.add(&sq.embed(&Poly::var(&r, 1)));
        assert!(x.swap_roots().swap_roots().equals(&x));
        let sym = x.add(&x.swap_roots());
        assert!(sym.in_base());
    }
}
