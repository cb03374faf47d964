//! Holomorphic and anti-holomorphic differential operators with polynomial
//! coefficients in the universe variables and `lam`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::expr::{PowerLogExpr, Side};
use crate::symbolic::field::DiffField;
use crate::symbolic::poly::{Monomial, Poly};
use crate::symbolic::rat::GaussRat;
use crate::symbolic::ring::{check_universe, RingRef};

/// `Σ c_α(x, λ) ∂^α`, normal-ordered (coefficients to the left).
///
/// Multi-indices have the length of the universe; only variables of the
/// operator's side carry nonzero orders.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOperator {
    ring: RingRef,
    side: Side,
    terms: BTreeMap<Monomial, Poly>,
}

fn binom(n: u16, k: u16) -> i64 {
    let mut acc: i64 = 1;
    for j in 0..k as i64 {
        acc = acc * (n as i64 - j) / (j + 1);
    }
    acc
}

/// All multi-indices `γ ≤ α`.
fn sub_indices(alpha: &[u16]) -> Vec<Monomial> {
    let mut out = vec![vec![0u16; alpha.len()]];
    for (i, &a) in alpha.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for g in &out {
            for e in 0..=a {
                let mut g2 = g.clone();
                g2[i] = e;
                next.push(g2);
            }
        }
        out = next;
    }
    out
}

impl DiffOperator {
    pub fn zero(ring: &RingRef, side: Side) -> Self {
        DiffOperator { ring: ring.clone(), side, terms: BTreeMap::new() }
    }

    pub fn identity(ring: &RingRef, side: Side) -> Self {
        Self::multiplication(&Poly::one(ring), side)
    }

    /// Multiplication by `p`, viewed as an order-zero operator.
    pub fn multiplication(p: &Poly, side: Side) -> Self {
        let mut op = Self::zero(p.ring(), side);
        op.add_term(vec![0; p.ring().len()], p.clone());
        op
    }

    /// `∂/∂x_var`; the side follows from the variable.
    pub fn partial(ring: &RingRef, var: usize) -> Result<Self> {
        let side = if ring.is_holo(var) {
            Side::Holo
        } else if ring.is_anti(var) {
            Side::Anti
        } else {
            return Err(Error::InvalidArgument(format!("cannot differentiate along {}", ring.name(var))));
        };
        let mut m = vec![0; ring.len()];
        m[var] = 1;
        let mut op = Self::zero(ring, side);
        op.add_term(m, Poly::one(ring));
        Ok(op)
    }

    /// Builds `Σ c ∂^α` from `(coefficient, multi-index)` pairs.
    pub fn from_terms(ring: &RingRef, side: Side, terms: impl IntoIterator<Item = (Poly, Monomial)>) -> Result<Self> {
        let mut op = Self::zero(ring, side);
        for (c, m) in terms {
            check_universe(ring, c.ring())?;
            if m.len() != ring.len() {
                return Err(Error::InvalidArgument("multi-index length differs from universe".into()));
            }
            for (i, &e) in m.iter().enumerate() {
                let ok = match side {
                    Side::Holo => ring.is_holo(i),
                    Side::Anti => ring.is_anti(i),
                };
                if e > 0 && !ok {
                    return Err(Error::InvalidArgument(format!(
                        "{:?} operator differentiates along {}",
                        side,
                        ring.name(i)
                    )));
                }
            }
            op.add_term(m, c);
        }
        Ok(op)
    }

    fn add_term(&mut self, m: Monomial, c: Poly) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(|| Poly::zero(&self.ring));
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().map(|&e| e as u32).sum()).max().unwrap_or(0)
    }

    fn same(&self, o: &Self) -> Result<()> {
        check_universe(&self.ring, &o.ring)?;
        if self.side != o.side && !(self.order() == 0 || o.order() == 0) {
            return Err(Error::InvalidArgument("operators act on different sides".into()));
        }
        Ok(())
    }

    fn joint_side(&self, o: &Self) -> Side {
        if self.order() == 0 {
            o.side
        } else {
            self.side
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        let mut out = self.clone();
        out.side = self.joint_side(o);
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("incompatible operators")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-GaussRat::one()))
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        let mut out = Self::zero(&self.ring, self.side);
        for (m, p) in &self.terms {
            out.add_term(m.clone(), p.scale(c));
        }
        out
    }

    /// Left multiplication by a polynomial: `p·P`.
    pub fn left_mul(&self, p: &Poly) -> Self {
        let mut out = Self::zero(&self.ring, self.side);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), p * c);
        }
        out
    }

    /// `self ∘ o`, normal-ordered by the Leibniz rule
    /// `a∂^α ∘ c∂^β = a Σ_γ binom(α,γ) (∂^γ c) ∂^{α−γ+β}`.
    pub fn try_compose(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        let mut out = Self::zero(&self.ring, self.joint_side(o));
        for (alpha, a) in &self.terms {
            for (beta, c) in &o.terms {
                for gamma in sub_indices(alpha) {
                    let mut dc = c.clone();
                    let mut w: i64 = 1;
                    for (i, &g) in gamma.iter().enumerate() {
                        for _ in 0..g {
                            dc = dc.deriv(i);
                        }
                        w *= binom(alpha[i], g);
                    }
                    if dc.is_zero() {
                        continue;
                    }
                    let m: Monomial = (0..alpha.len()).map(|i| alpha[i] - gamma[i] + beta[i]).collect();
                    out.add_term(m, (a * &dc).scale(&GaussRat::int(w)));
                }
            }
        }
        Ok(out)
    }

    pub fn compose(&self, o: &Self) -> Self {
        self.try_compose(o).expect("incompatible operators")
    }

    /// Formal adjoint `Σ (−1)^{|α|} ∂^α ∘ c_α`, normal-ordered.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(&self.ring, self.side);
        for (alpha, c) in &self.terms {
            let sign = if alpha.iter().map(|&e| e as u32).sum::<u32>() % 2 == 0 { 1 } else { -1 };
            for gamma in sub_indices(alpha) {
                let mut dc = c.clone();
                let mut w: i64 = sign;
                for (i, &g) in gamma.iter().enumerate() {
                    for _ in 0..g {
                        dc = dc.deriv(i);
                    }
                    w *= binom(alpha[i], g);
                }
                if dc.is_zero() {
                    continue;
                }
                let m: Monomial = (0..alpha.len()).map(|i| alpha[i] - gamma[i]).collect();
                out.add_term(m, dc.scale(&GaussRat::int(w)));
            }
        }
        out
    }

    /// Mirror operator: `z -> z̄`, `∂ -> ∂̄`, coefficients conjugated, `lam` fixed.
    pub fn conjugate(&self) -> Self {
        let side = match self.side {
            Side::Holo => Side::Anti,
            Side::Anti => Side::Holo,
        };
        let mut out = Self::zero(&self.ring, side);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; m.len()];
            for (i, &e) in m.iter().enumerate() {
                m2[self.ring.conj_index(i)] += e;
            }
            out.add_term(m2, c.conj());
        }
        out
    }

    /// `lam -> lam + shift` in every coefficient.
    pub fn shift_lambda(&self, shift: &GaussRat) -> Self {
        let mut out = Self::zero(&self.ring, self.side);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.shift_lambda(shift));
        }
        out
    }

    /// Substitutes a value for `lam` in every coefficient.
    pub fn at_lambda(&self, value: &GaussRat) -> Self {
        match self.ring.lambda() {
            Some(l) => {
                let mut out = Self::zero(&self.ring, self.side);
                for (m, c) in &self.terms {
                    out.add_term(m.clone(), c.partial_eval(l, value));
                }
                out
            }
            None => self.clone(),
        }
    }

    /// Applies the operator to a polynomial.
    pub fn apply_poly(&self, p: &Poly) -> Result<Poly> {
        check_universe(&self.ring, p.ring())?;
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut d = p.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    d = d.deriv(i);
                }
            }
            out = &out + &(c * &d);
        }
        Ok(out)
    }

    /// Applies the operator to a coefficient-field element.
    pub fn apply_field<K: DiffField>(&self, k: &K) -> Result<K> {
        check_universe(&self.ring, k.ring())?;
        let mut out = k.zero_like();
        for (m, c) in &self.terms {
            let mut d = k.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    d = d.deriv(i);
                }
            }
            out = out.add(&k.embed(c).mul(&d));
        }
        Ok(out)
    }

    /// Applies the operator to a power–log expression.
    pub fn apply<K: DiffField>(&self, e: &PowerLogExpr<K>) -> Result<PowerLogExpr<K>> {
        check_universe(&self.ring, e.carrier().ring())?;
        let mut cache: BTreeMap<Monomial, PowerLogExpr<K>> = BTreeMap::new();
        cache.insert(vec![0; self.ring.len()], e.clone());
        let mut out = e.empty_like();
        for (m, c) in &self.terms {
            let d = derivative_cached(&mut cache, m, self.side)?;
            out = out.add(&d.scale_poly(c));
        }
        Ok(out)
    }

    /// Sum of the orders along each variable, for diagnostics.
    pub fn max_order_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }
}

fn derivative_cached<K: DiffField>(
    cache: &mut BTreeMap<Monomial, PowerLogExpr<K>>,
    m: &Monomial,
    side: Side,
) -> Result<PowerLogExpr<K>> {
    if let Some(d) = cache.get(m) {
        return Ok(d.clone());
    }
    let i = m.iter().rposition(|&e| e > 0).expect("nonzero multi-index");
    let mut prev = m.clone();
    prev[i] -= 1;
    let p = derivative_cached(cache, &prev, side)?;
    let d = p.diff_side(i, side)?;
    cache.insert(m.clone(), d.clone());
    Ok(d)
}

impl fmt::Display for DiffOperator {
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
            write!(f, "({c})")?;
            for (i, &e) in m.iter().enumerate() {
                if e == 1 {
                    write!(f, "*d[{}]", self.ring.name(i))?;
                } else if e > 1 {
                    write!(f, "*d[{}]^{}", self.ring.name(i), e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.side, self)
    }
}

/// Serialized operator term: coefficient polynomial string and multi-index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpTermJson(pub String, pub Vec<u16>);

impl DiffOperator {
    pub fn to_json_terms(&self) -> Vec<OpTermJson> {
        self.terms.iter().map(|(m, c)| OpTermJson(c.to_string(), m.clone())).collect()
    }

    pub fn from_json_terms(ring: &RingRef, side: Side, terms: &[OpTermJson]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|OpTermJson(c, m)| Ok((Poly::parse(ring, c)?, m.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(ring, side, parsed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::ring::Ring;

    fn setup() -> (RingRef, Poly, DiffOperator) {
        let r = Ring::coordinates(&["z"]);
        let z = Poly::var(&r, 0);
        let d = DiffOperator::partial(&r, 0).unwrap();
        (r, z, d)
    }

    #[test]
    fn commutator_is_one() {
        let (_, z, d) = setup();
        let zm = DiffOperator::multiplication(&z, Side::Holo);
        let c = d.compose(&zm).sub(&zm.compose(&d));
        assert_eq!(c, DiffOperator::identity(z.ring(), Side::Holo));
    }

    #[test]
    fn adjoint_examples() {
        let (r, z, d) = setup();
        assert_eq!(d.adjoint(), d.scale(&GaussRat::int(-1)));
        let zd = d.left_mul(&z);
        let expect = zd.scale(&GaussRat::int(-1)).sub(&DiffOperator::identity(&r, Side::Holo));
        assert_eq!(zd.adjoint(), expect);
        let d2 = d.compose(&d);
        assert_eq!(d2.adjoint(), d2);
        assert_eq!(zd.adjoint().adjoint(), zd);
    }

    #[test]
    fn conjugate_examples() {
        let (r, z, d) = setup();
        let db = DiffOperator::partial(&r, 1).unwrap();
        assert_eq!(d.conjugate(), db);
        assert_eq!(d.left_mul(&z).conjugate(), db.left_mul(&z.conj()));
    }
}
