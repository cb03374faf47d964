//! Sparse multivariate polynomials with Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::rat::{GaussRat, Rat};
use super::ring::{check_universe, same_universe, RingRef};
use crate::error::{Error, Result};
use crate::scalar::{cplx, Real};

pub type Monomial = Vec<u16>;

/// Canonical sparse polynomial: no zero coefficients are ever stored.
#[derive(Clone)]
pub struct Poly {
    ring: RingRef,
    terms: BTreeMap<Monomial, GaussRat>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_universe(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state)
    }
}

impl Poly {
    pub fn zero(ring: &RingRef) -> Self {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, GaussRat::one())
    }

    pub fn constant(ring: &RingRef, c: GaussRat) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(vec![0; ring.len()], c);
        }
        p
    }

    pub fn int(ring: &RingRef, n: i64) -> Self {
        Self::constant(ring, GaussRat::int(n))
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        let mut m = vec![0; ring.len()];
        m[i] = 1;
        Self::monomial(ring, m, GaussRat::one())
    }

    pub fn var_named(ring: &RingRef, name: &str) -> Result<Self> {
        Ok(Self::var(ring, ring.index(name)?))
    }

    pub fn monomial(ring: &RingRef, exps: Monomial, c: GaussRat) -> Self {
        assert_eq!(exps.len(), ring.len(), "monomial arity");
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(ring: &RingRef, terms: impl IntoIterator<Item = (Monomial, GaussRat)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_term(&self) -> GaussRat {
        self.terms
            .get(&vec![0; self.ring.len()])
            .cloned()
            .unwrap_or_else(GaussRat::zero)
    }

    pub fn coeff(&self, m: &[u16]) -> GaussRat {
        self.terms.get(m).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, rhs: &Poly) -> Result<Poly> {
        check_universe(&self.ring, &rhs.ring)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, rhs: &Poly) -> Result<Poly> {
        check_universe(&self.ring, &rhs.ring)?;
        let mut out = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn deriv(&self, var: usize) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] -= 1;
            out.add_term(m2, c * &GaussRat::int(e as i64));
        }
        out
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// True when the polynomial only involves the listed variables.
    pub fn depends_only_on(&self, vars: &[usize]) -> bool {
        self.terms
            .keys()
            .all(|m| m.iter().enumerate().all(|(i, &e)| e == 0 || vars.contains(&i)))
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m[var] > 0)
    }

    /// Conjugation: swaps each holomorphic variable with its conjugate and
    /// conjugates coefficients. Auxiliary variables and `lam` are fixed.
    pub fn conj(&self) -> Poly {
        let n = self.ring.len();
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; n];
            for (i, &e) in m.iter().enumerate() {
                m2[self.ring.conj_index(i)] += e;
            }
            out.add_term(m2, c.conj());
        }
        out
    }

    /// Substitutes `var := value`.
    pub fn subst(&self, var: usize, value: &Poly) -> Poly {
        assert!(same_universe(&self.ring, &value.ring));
        let max = self.degree_in(var);
        let mut powers = vec![Poly::one(&self.ring)];
        for k in 1..=max as usize {
            powers.push(&powers[k - 1] * value);
        }
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m[var] as usize;
            let mut m2 = m.clone();
            m2[var] = 0;
            let rest = Poly::monomial(&self.ring, m2, c.clone());
            out = &out + &(&rest * &powers[e]);
        }
        out
    }

    /// `lam -> lam + shift` on the spectral parameter.
    pub fn shift_lambda(&self, shift: &GaussRat) -> Poly {
        match self.ring.lambda() {
            Some(l) if self.uses_var(l) => {
                let v = &Poly::var(&self.ring, l) + &Poly::constant(&self.ring, shift.clone());
                self.subst(l, &v)
            }
            _ => self.clone(),
        }
    }

    /// Rewrites the polynomial in another universe; `map[i]` gives the
    /// target index of source variable `i` (variables with nonzero exponent
    /// must be mapped).
    pub fn map_ring(&self, target: &RingRef, map: &[Option<usize>]) -> Result<Poly> {
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; target.len()];
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| {
                    Error::UniverseMismatch(format!("variable {} has no image", self.ring.name(i)))
                })?;
                m2[j] += e;
            }
            out.add_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Lexicographically leading term.
    pub fn leading(&self) -> Option<(&Monomial, &GaussRat)> {
        self.terms.iter().next_back()
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(same_universe(&self.ring, &d.ring));
        let (dm, dc) = d.leading()?;
        let dm = dm.clone();
        let dinv = dc.inv()?;
        if d.terms.len() == 1 {
            let mut out = Poly::zero(&self.ring);
            for (m, c) in &self.terms {
                if m.iter().zip(&dm).any(|(a, b)| a < b) {
                    return None;
                }
                let q: Monomial = m.iter().zip(&dm).map(|(a, b)| a - b).collect();
                out.add_term(q, c * &dinv);
            }
            return Some(out);
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ring);
        while let Some((m, c)) = rem.leading() {
            if m.iter().zip(&dm).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Monomial = m.iter().zip(&dm).map(|(a, b)| a - b).collect();
            let qc = c * &dinv;
            let t = Poly::monomial(&self.ring, qm, qc);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Common monomial factor (componentwise minimum exponent).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.ring.len()];
        };
        let mut g = first.clone();
        for m in it {
            for (a, b) in g.iter_mut().zip(m) {
                *a = (*a).min(*b);
            }
        }
        g
    }

    pub fn eval<T: Real>(&self, vals: &[Complex<T>]) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (m, c) in &self.terms {
            let mut t = cplx::<T>(c.to_complex());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t * vals[i].powu(e as u32);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Evaluates with exact rational values for a subset of variables
    /// (others keep their symbols).
    pub fn partial_eval(&self, var: usize, value: &GaussRat) -> Poly {
        self.subst(var, &Poly::constant(&self.ring, value.clone()))
    }

    /// Roots of a univariate polynomial in `lam` that factors over the
    /// rationals into linear factors with rational roots; returns
    /// `(root, multiplicity)` pairs found by rational-root search, together
    /// with the unfactored remainder.
    pub fn rational_roots_in(&self, var: usize) -> (Vec<(Rat, u32)>, Poly) {
        super::roots::rational_roots(self, var)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial universes differ")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_add(&-rhs).expect("polynomial universes differ")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial universes differ")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.ring.name(i).to_string()
                    } else {
                        format!("{}^{}", self.ring.name(i), e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{c}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::ring::Ring;

    #[test]
    fn difference_of_squares() {
        let r = Ring::coordinates(&["z"]);
        let z = Poly::var(&r, 0);
        let one = Poly::one(&r);
        let p = &(&z + &one) * &(&z - &one);
        assert_eq!(p, &z.pow(2) - &one);
        assert_eq!(&p + &Poly::zero(&r), p);
    }

    #[test]
    fn universe_mismatch_is_an_error() {
        let a = Ring::coordinates(&["z"]);
        let b = Ring::coordinates(&["w"]);
        assert!(Poly::var(&a, 0).try_add(&Poly::var(&b, 0)).is_err());
        assert!(Poly::var(&a, 0).try_mul(&Poly::var(&b, 0)).is_err());
    }

    #[test]
    fn exact_division() {
        let r = Ring::coordinates(&["z1", "z2"]);
        let z1 = Poly::var(&r, 0);
        let z2 = Poly::var(&r, 1);
        let a = &z1 + &z2.pow(2);
        let b = &(&z1 * &z2) - &Poly::int(&r, 3);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert!((&p + &Poly::one(&r)).div_exact(&a).is_none());
    }

    #[test]
    fn conj_swaps_pairs() {
        let r = Ring::coordinates(&["z"]);
        let z = Poly::var(&r, 0);
        let p = z.scale(&GaussRat::i());
        let c = p.conj();
        assert_eq!(c, Poly::var(&r, 1).scale(&-GaussRat::i()));
        assert_eq!(c.conj(), p);
    }
}
