//! Power–log expressions `Σ R · f^{a·λ+s} · f̄^{b·λ+t} · Π L_g^{q}`.
//!
//! `L_g` stands for `log|g|²`. The class is closed under holomorphic and
//! anti-holomorphic differentiation; coefficients live in any
//! [`DiffField`]. The holomorphic carrier `f` and its conjugate carrier
//! `f̄` are fixed per expression, as are the log symbols.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::DiffField;
use super::poly::Poly;
use super::rat::{GaussRat, Rat};
use crate::error::{Error, Result};
use crate::scalar::{log_anti, log_holo, Real};

/// Affine exponent `lam·λ + shift`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exponent {
    pub lam: i32,
    pub shift: ExpShift,
}

/// Exponent shift kept as a pair of rationals so it can be ordered.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExpShift {
    pub re: Rat,
    pub im: Rat,
}

impl From<GaussRat> for ExpShift {
    fn from(g: GaussRat) -> Self {
        ExpShift { re: g.re, im: g.im }
    }
}

impl ExpShift {
    pub fn gauss(&self) -> GaussRat {
        GaussRat::new(self.re.clone(), self.im.clone())
    }
}

impl Exponent {
    pub fn zero() -> Self {
        Exponent { lam: 0, shift: GaussRat::zero().into() }
    }

    /// `λ + shift`.
    pub fn lambda_plus(shift: GaussRat) -> Self {
        Exponent { lam: 1, shift: shift.into() }
    }

    pub fn constant(shift: GaussRat) -> Self {
        Exponent { lam: 0, shift: shift.into() }
    }

    pub fn is_zero(&self) -> bool {
        self.lam == 0 && self.shift.re.is_zero() && self.shift.im.is_zero()
    }

    fn shifted(&self, by: i64) -> Self {
        Exponent {
            lam: self.lam,
            shift: ExpShift { re: &self.shift.re + Rat::from_integer(by.into()), im: self.shift.im.clone() },
        }
    }

    /// Class modulo integer shifts, and the integer part.
    fn class(&self) -> ((i32, Rat, Rat), i64) {
        let fl = self.shift.re.floor();
        let frac = &self.shift.re - &fl;
        let n: i64 = fl.to_integer().try_into().unwrap_or(i64::MIN / 4);
        ((self.lam, frac, self.shift.im.clone()), n)
    }

    /// Value at `λ = lambda`.
    pub fn value<T: Real>(&self, lambda: Complex<T>) -> Complex<T> {
        let s = crate::scalar::cplx::<T>(self.shift.gauss().to_complex());
        lambda * T::lit(self.lam as f64) + s
    }

    /// The exponent as a field element (a polynomial in `lam`).
    fn as_coeff<K: DiffField>(&self, like: &K) -> K {
        let ring = like.ring();
        let mut p = Poly::constant(ring, self.shift.gauss());
        if self.lam != 0 {
            let l = ring.lambda().expect("universe without lam carries a λ-exponent");
            p = &p + &Poly::var(ring, l).scale(&GaussRat::int(self.lam as i64));
        }
        like.embed(&p)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.shift.gauss();
        match (self.lam, s.is_zero()) {
            (0, _) => write!(f, "{s}"),
            (1, true) => write!(f, "lam"),
            (1, false) => write!(f, "lam+{s}"),
            (l, true) => write!(f, "{l}lam"),
            (l, false) => write!(f, "{l}lam+{s}"),
        }
    }
}

/// Declared log symbol `L_g = log|g|²`, carried as the pair `(g, ḡ)`.
#[derive(Clone, Debug)]
pub struct LogSymbol<K: DiffField> {
    pub name: String,
    pub g: K,
    pub gbar: K,
}

#[derive(Clone, Debug)]
pub struct Term<K: DiffField> {
    pub coeff: K,
    pub f_exp: Exponent,
    pub fbar_exp: Exponent,
    pub logs: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct PowerLogExpr<K: DiffField> {
    f: K,
    fbar: K,
    logs: Vec<LogSymbol<K>>,
    // log symbol i coincides with f (resp. f̄) on its holomorphic (resp. anti) half
    log_is_f: Vec<bool>,
    log_is_fbar: Vec<bool>,
    terms: Vec<Term<K>>,
}

/// Derivative side requested by callers that must not mix the two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Holo,
    Anti,
}

impl<K: DiffField> PowerLogExpr<K> {
    /// Empty (zero) expression with carriers `f`, `f̄` and log symbols.
    pub fn new(f: K, fbar: K, logs: Vec<LogSymbol<K>>) -> Self {
        let log_is_f = logs.iter().map(|l| l.g.equals(&f)).collect();
        let log_is_fbar = logs.iter().map(|l| l.gbar.equals(&fbar)).collect();
        PowerLogExpr { f, fbar, logs, log_is_f, log_is_fbar, terms: Vec::new() }
    }

    /// Expression with carrier `f` and its exact conjugate as `f̄`.
    pub fn with_carrier(f: K) -> Self {
        let fbar = f.conj();
        Self::new(f, fbar, Vec::new())
    }

    pub fn carrier(&self) -> &K {
        &self.f
    }

    pub fn conj_carrier(&self) -> &K {
        &self.fbar
    }

    pub fn log_symbols(&self) -> &[LogSymbol<K>] {
        &self.logs
    }

    pub fn terms(&self) -> &[Term<K>] {
        &self.terms
    }

    /// A zero expression sharing carriers and log symbols with `self`.
    pub fn empty_like(&self) -> Self {
        PowerLogExpr { terms: Vec::new(), ..self.clone() }
    }

    pub fn push(&mut self, coeff: K, f_exp: Exponent, fbar_exp: Exponent, logs: Vec<u32>) {
        assert_eq!(logs.len(), self.logs.len(), "log power arity");
        if !coeff.is_zero() {
            self.terms.push(Term { coeff, f_exp, fbar_exp, logs });
        }
    }

    pub fn term(mut self, coeff: K, f_exp: Exponent, fbar_exp: Exponent) -> Self {
        let n = self.logs.len();
        self.push(coeff, f_exp, fbar_exp, vec![0; n]);
        self
    }

    pub fn term_with_logs(mut self, coeff: K, f_exp: Exponent, fbar_exp: Exponent, logs: Vec<u32>) -> Self {
        self.push(coeff, f_exp, fbar_exp, logs);
        self
    }

    fn compatible(&self, o: &Self) -> bool {
        self.f.equals(&o.f)
            && self.fbar.equals(&o.fbar)
            && self.logs.len() == o.logs.len()
            && self.logs.iter().zip(&o.logs).all(|(a, b)| a.g.equals(&b.g) && a.gbar.equals(&b.gbar))
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if !self.compatible(o) {
            return Err(Error::UniverseMismatch("expressions with different carriers".into()));
        }
        let mut out = self.clone();
        out.terms.extend(o.terms.iter().cloned());
        Ok(out.normalized())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("expression carriers differ")
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.f.scalar(&-GaussRat::one()))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Multiplies every coefficient by `k`.
    pub fn scale(&self, k: &K) -> Self {
        let mut out = self.empty_like();
        for t in &self.terms {
            out.push(t.coeff.mul(k), t.f_exp.clone(), t.fbar_exp.clone(), t.logs.clone());
        }
        out
    }

    pub fn scale_poly(&self, p: &Poly) -> Self {
        self.scale(&self.f.embed(p))
    }

    /// Maps every coefficient through `op` (carriers and logs unchanged).
    pub fn map_coeffs(&self, op: impl Fn(&K) -> K) -> Self {
        let mut out = self.empty_like();
        for t in &self.terms {
            out.push(op(&t.coeff), t.f_exp.clone(), t.fbar_exp.clone(), t.logs.clone());
        }
        out
    }

    /// Partial derivative with respect to universe variable `var`.
    pub fn diff(&self, var: usize) -> Self {
        let df = self.f.deriv(var);
        let dfbar = self.fbar.deriv(var);
        let dlogs: Vec<(K, K)> = self.logs.iter().map(|l| (l.g.deriv(var), l.gbar.deriv(var))).collect();
        let mut out = self.empty_like();
        for t in &self.terms {
            let dc = t.coeff.deriv(var);
            out.push(dc, t.f_exp.clone(), t.fbar_exp.clone(), t.logs.clone());
            if !t.f_exp.is_zero() && !df.is_zero() {
                let c = t.coeff.mul(&t.f_exp.as_coeff(&self.f)).mul(&df);
                out.push(c, t.f_exp.shifted(-1), t.fbar_exp.clone(), t.logs.clone());
            }
            if !t.fbar_exp.is_zero() && !dfbar.is_zero() {
                let c = t.coeff.mul(&t.fbar_exp.as_coeff(&self.f)).mul(&dfbar);
                out.push(c, t.f_exp.clone(), t.fbar_exp.shifted(-1), t.logs.clone());
            }
            for (i, &q) in t.logs.iter().enumerate() {
                if q == 0 {
                    continue;
                }
                let mut lp = t.logs.clone();
                lp[i] -= 1;
                let qk = self.f.scalar(&GaussRat::int(q as i64));
                let (dg, dgbar) = &dlogs[i];
                if !dg.is_zero() {
                    let c = t.coeff.mul(&qk).mul(dg);
                    if self.log_is_f[i] {
                        out.push(c, t.f_exp.shifted(-1), t.fbar_exp.clone(), lp.clone());
                    } else {
                        let c = c.mul(&self.logs[i].g.inv().expect("log argument is nonzero"));
                        out.push(c, t.f_exp.clone(), t.fbar_exp.clone(), lp.clone());
                    }
                }
                if !dgbar.is_zero() {
                    let c = t.coeff.mul(&qk).mul(dgbar);
                    if self.log_is_fbar[i] {
                        out.push(c, t.f_exp.clone(), t.fbar_exp.shifted(-1), lp.clone());
                    } else {
                        let c = c.mul(&self.logs[i].gbar.inv().expect("log argument is nonzero"));
                        out.push(c, t.f_exp.clone(), t.fbar_exp.clone(), lp);
                    }
                }
            }
        }
        out.normalized()
    }

    /// Derivative that refuses to differentiate a variable of the wrong side.
    pub fn diff_side(&self, var: usize, side: Side) -> Result<Self> {
        let ring = self.f.ring();
        let ok = match side {
            Side::Holo => ring.is_holo(var),
            Side::Anti => ring.is_anti(var),
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "variable {} is not {:?}",
                ring.name(var),
                side
            )));
        }
        Ok(self.diff(var))
    }

    /// Canonical form: terms whose exponents agree modulo integers are brought
    /// to the smallest exponent in their class (multiplying coefficients by
    /// integral carrier powers) and merged; zero terms are dropped.
    pub fn normalized(&self) -> Self {
        type Key = ((i32, Rat, Rat), (i32, Rat, Rat), Vec<u32>);
        let mut groups: BTreeMap<Key, Vec<(i64, i64, &K)>> = BTreeMap::new();
        for t in &self.terms {
            let (cf, nf) = t.f_exp.class();
            let (cb, nb) = t.fbar_exp.class();
            groups.entry((cf, cb, t.logs.clone())).or_default().push((nf, nb, &t.coeff));
        }
        let mut out = self.empty_like();
        for ((cf, cb, logs), items) in groups {
            let minf = items.iter().map(|x| x.0).min().unwrap_or(0);
            let minb = items.iter().map(|x| x.1).min().unwrap_or(0);
            let mut acc = self.f.zero_like();
            for (nf, nb, c) in items {
                let mut c = (*c).clone();
                if nf > minf {
                    c = c.mul(&self.f.powi(nf - minf).expect("non-negative power"));
                }
                if nb > minb {
                    c = c.mul(&self.fbar.powi(nb - minb).expect("non-negative power"));
                }
                acc = acc.add(&c);
            }
            if acc.is_zero() {
                continue;
            }
            let f_exp = Exponent {
                lam: cf.0,
                shift: ExpShift { re: cf.1 + Rat::from_integer(minf.into()), im: cf.2 },
            };
            let fbar_exp = Exponent {
                lam: cb.0,
                shift: ExpShift { re: cb.1 + Rat::from_integer(minb.into()), im: cb.2 },
            };
            out.terms.push(Term { coeff: acc, f_exp, fbar_exp, logs });
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.normalized().terms.is_empty()
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// `λ -> λ + shift` everywhere (coefficients and exponents).
    pub fn shift_lambda(&self, shift: &GaussRat) -> Self {
        let mut out = self.empty_like();
        for t in &self.terms {
            let mut fe = t.f_exp.clone();
            let mut be = t.fbar_exp.clone();
            if fe.lam != 0 {
                fe.shift = (&fe.shift.gauss() + &(shift * &GaussRat::int(fe.lam as i64))).into();
            }
            if be.lam != 0 {
                be.shift = (&be.shift.gauss() + &(shift * &GaussRat::int(be.lam as i64))).into();
            }
            out.push(t.coeff.shift_lambda(shift), fe, be, t.logs.clone());
        }
        out.normalized()
    }

    /// Collapses an expression with integral exponents and no logs into a
    /// single field element.
    pub fn flatten(&self) -> Option<K> {
        let mut acc = self.f.zero_like();
        for t in &self.normalized().terms {
            if t.logs.iter().any(|&q| q > 0) {
                return None;
            }
            let (cf, nf) = t.f_exp.class();
            let (cb, nb) = t.fbar_exp.class();
            let integral = |c: &(i32, Rat, Rat)| c.0 == 0 && c.1.is_zero() && c.2.is_zero();
            if !integral(&cf) || !integral(&cb) {
                return None;
            }
            let c = t.coeff.mul(&self.f.powi(nf)?).mul(&self.fbar.powi(nb)?);
            acc = acc.add(&c);
        }
        Some(acc)
    }

    /// Numeric value at `vals` (all universe variables, `lam` included at its
    /// index; the `lambda` argument overrides it for the exponents).
    pub fn eval<T: Real>(&self, vals: &[Complex<T>], lambda: Complex<T>, guard: f64) -> Result<Complex<T>> {
        let mut vals = vals.to_vec();
        if let Some(l) = self.f.ring().lambda() {
            if l < vals.len() {
                vals[l] = lambda;
            }
        }
        let needs_f = self.terms.iter().any(|t| !t.f_exp.is_zero());
        let needs_fbar = self.terms.iter().any(|t| !t.fbar_exp.is_zero());
        let log_f = if needs_f {
            let fv = self.f.eval(&vals, guard)?;
            if fv.norm().to_f64_lossy() < guard {
                return Err(Error::Singularity(format!("|f| below guard {guard:e}")));
            }
            log_holo(fv)
        } else {
            Complex::zero()
        };
        let log_fbar = if needs_fbar {
            let fv = self.fbar.eval(&vals, guard)?;
            if fv.norm().to_f64_lossy() < guard {
                return Err(Error::Singularity(format!("|f̄| below guard {guard:e}")));
            }
            log_anti(fv)
        } else {
            Complex::zero()
        };
        let mut lvals = Vec::with_capacity(self.logs.len());
        for l in &self.logs {
            let g = l.g.eval(&vals, guard)?;
            let gb = l.gbar.eval(&vals, guard)?;
            if g.norm().to_f64_lossy() < guard || gb.norm().to_f64_lossy() < guard {
                return Err(Error::Singularity(format!("log argument {} below guard", l.name)));
            }
            lvals.push(log_holo(g) + log_anti(gb));
        }
        let mut acc = Complex::zero();
        for t in &self.terms {
            let mut v = t.coeff.eval(&vals, guard)?;
            if !t.f_exp.is_zero() {
                v = v * (t.f_exp.value(lambda) * log_f).exp();
            }
            if !t.fbar_exp.is_zero() {
                v = v * (t.fbar_exp.value(lambda) * log_fbar).exp();
            }
            for (q, lv) in t.logs.iter().zip(&lvals) {
                if *q > 0 {
                    v = v * lv.powu(*q);
                }
            }
            acc = acc + v;
        }
        Ok(acc)
    }
}

impl<K: DiffField> fmt::Display for PowerLogExpr<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        if n.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in n.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", t.coeff.simplify())?;
            if !t.f_exp.is_zero() {
                write!(f, "*f^({})", t.f_exp)?;
            }
            if !t.fbar_exp.is_zero() {
                write!(f, "*fb^({})", t.fbar_exp)?;
            }
            for (q, l) in t.logs.iter().zip(&self.logs) {
                if *q > 0 {
                    write!(f, "*L[{}]^{}", l.name, q)?;
                }
            }
        }
        Ok(())
    }
}

/// Magnitude of an exponent's real shift, for ordering diagnostics.
pub fn shift_abs(e: &Exponent) -> Rat {
    e.shift.re.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::field::RatFn;
    use crate::symbolic::ring::Ring;

    fn zring() -> crate::symbolic::ring::RingRef {
        Ring::coordinates(&["z"])
    }

    #[test]
    fn power_rule() {
        let r = zring();
        let z = RatFn::from_poly(Poly::var(&r, 0));
        let one = z.one_like();
        let e = PowerLogExpr::with_carrier(z.clone()).term(one.clone(), Exponent::lambda_plus(GaussRat::zero()), Exponent::zero());
        let d = e.diff(0);
        let lam = RatFn::from_poly(Poly::var(&r, r.lambda().unwrap()));
        let expect = PowerLogExpr::with_carrier(z).term(lam, Exponent::lambda_plus(GaussRat::int(-1)), Exponent::zero());
        assert!(d.equals(&expect));
    }

    #[test]
    fn log_derivative() {
        let r = zring();
        let z = RatFn::from_poly(Poly::var(&r, 0));
        let zb = RatFn::from_poly(Poly::var(&r, 1));
        let logs = vec![LogSymbol { name: "z".into(), g: z.clone(), gbar: zb.clone() }];
        let e = PowerLogExpr::new(z.clone(), zb, logs).term_with_logs(z.one_like(), Exponent::zero(), Exponent::zero(), vec![1]);
        let d = e.diff(0).flatten().unwrap();
        assert!(d.equals(&z.inv().unwrap()));
    }

    #[test]
    fn chain_rule_example() {
        // ∂_z( z̄·(z²+1)^λ ) = 2λ·z·z̄·(z²+1)^{λ−1}
        let r = zring();
        let z = Poly::var(&r, 0);
        let zb = Poly::var(&r, 1);
        let lam = Poly::var(&r, r.lambda().unwrap());
        let f = RatFn::from_poly(&z.pow(2) + &Poly::one(&r));
        let e = PowerLogExpr::with_carrier(f.clone()).term(RatFn::from_poly(zb.clone()), Exponent::lambda_plus(GaussRat::zero()), Exponent::zero());
        let d = e.diff(0);
        let c = &(&lam * &z) * &zb;
        let expect = PowerLogExpr::with_carrier(f).term(
            RatFn::from_poly(c.scale(&GaussRat::int(2))),
            Exponent::lambda_plus(GaussRat::int(-1)),
            Exponent::zero(),
        );
        assert!(d.equals(&expect));
    }
}
