//! Rational functions over the Gaussian rationals.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::field::DiffField;
use super::poly::Poly;
use super::rat::GaussRat;
use super::ring::RingRef;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `num / den` with `den != 0`. Normalized so that `den` has leading
/// coefficient 1 and no monomial factor is shared with `num`; exact
/// divisibility between the two is cancelled. Full gcd cancellation is not
/// attempted, so equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("rational function with zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let ring = p.ring().clone();
        RatFn { num: p, den: Poly::one(&ring) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    fn normalized(mut num: Poly, mut den: Poly) -> Self {
        let ring = num.ring().clone();
        if num.is_zero() {
            return RatFn { num, den: Poly::one(&ring) };
        }
        // shared monomial factor
        let gn = num.monomial_content();
        let gd = den.monomial_content();
        let g: Vec<u16> = gn.iter().zip(&gd).map(|(a, b)| (*a).min(*b)).collect();
        if g.iter().any(|&e| e > 0) {
            let m = Poly::monomial(&ring, g, GaussRat::one());
            num = num.div_exact(&m).expect("monomial content divides");
            den = den.div_exact(&m).expect("monomial content divides");
        }
        if !den.is_constant() {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = Poly::one(&ring);
            } else if let Some(q) = den.div_exact(&num) {
                if !num.is_constant() {
                    den = q;
                    num = Poly::one(&ring);
                }
            }
        }
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(GaussRat::one);
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFn { num, den }
    }
}

impl PartialEq for RatFn {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl DiffField for RatFn {
    fn ring(&self) -> &RingRef {
        self.num.ring()
    }

    fn embed(&self, p: &Poly) -> Self {
        RatFn::from_poly(p.clone())
    }

    fn add(&self, o: &Self) -> Self {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::normalized(&self.num + &o.num, self.den.clone());
        }
        if let Some(q) = self.den.div_exact(&o.den) {
            return Self::normalized(&self.num + &(&o.num * &q), self.den.clone());
        }
        if let Some(q) = o.den.div_exact(&self.den) {
            return Self::normalized(&(&self.num * &q) + &o.num, o.den.clone());
        }
        Self::normalized(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    fn mul(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return self.zero_like();
        }
        // cancel across before multiplying
        let (mut n1, mut d1) = (self.num.clone(), self.den.clone());
        let (mut n2, mut d2) = (o.num.clone(), o.den.clone());
        if !d2.is_constant() {
            if let Some(q) = n1.div_exact(&d2) {
                n1 = q;
                d2 = Poly::one(n1.ring());
            }
        }
        if !d1.is_constant() {
            if let Some(q) = n2.div_exact(&d1) {
                n2 = q;
                d1 = Poly::one(n2.ring());
            }
        }
        Self::normalized(&n1 * &n2, &d1 * &d2)
    }

    fn neg(&self) -> Self {
        RatFn { num: -&self.num, den: self.den.clone() }
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::normalized(self.den.clone(), self.num.clone()))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn deriv(&self, var: usize) -> Self {
        let dn = self.num.deriv(var);
        let dd = self.den.deriv(var);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        Self::normalized(
            &(&dn * &self.den) - &(&self.num * &dd),
            &self.den * &self.den,
        )
    }

    fn eval<T: Real>(&self, vals: &[Complex<T>], guard: f64) -> Result<Complex<T>> {
        let d = self.den.eval(vals);
        if d.norm().to_f64_lossy() < guard {
            return Err(Error::Singularity(format!("denominator {} vanishes", self.den)));
        }
        Ok(self.num.eval(vals) / d)
    }

    fn shift_lambda(&self, shift: &GaussRat) -> Self {
        Self::normalized(self.num.shift_lambda(shift), self.den.shift_lambda(shift))
    }

    fn conj(&self) -> Self {
        Self::normalized(self.num.conj(), self.den.conj())
    }

    fn swap_roots(&self) -> Self {
        self.clone()
    }
}

impl RatFn {
    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn constant_value(&self) -> Option<GaussRat> {
        if self.num.is_constant() && self.den.is_constant() {
            let d = self.den.constant_term();
            if d.is_zero() {
                return None;
            }
            Some(&self.num.constant_term() / &d)
        } else {
            None
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::ring::Ring;

    #[test]
    fn quotient_rule_and_cancellation() {
        let r = Ring::coordinates(&["z"]);
        let z = Poly::var(&r, 0);
        let f = RatFn::new(Poly::one(&r), z.clone()).unwrap();
        let df = f.deriv(0);
        let expect = RatFn::new(-Poly::one(&r), z.pow(2)).unwrap();
        assert!(df.equals(&expect));
        let back = f.mul(&RatFn::from_poly(z.clone()));
        assert!(back.is_one());
        assert!(RatFn::new(z, Poly::zero(&r)).is_err());
    }

    #[test]
    fn addition_over_divisible_denominators() {
        let r = Ring::coordinates(&["z"]);
        let z = Poly::var(&r, 0);
        let one = Poly::one(&r);
        let a = RatFn::new(one.clone(), &z + &one).unwrap();
        let b = RatFn::new(z.clone(), (&z + &one).pow(2)).unwrap();
        let s = a.add(&b);
        let expect = RatFn::new(&(&z + &z) + &one, (&z + &one).pow(2)).unwrap();
        assert!(s.equals(&expect));
    }
}
