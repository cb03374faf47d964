//! Compactly supported test densities `p(z, z̄, u, λ) · Π_j B(t_j)`.
//!
//! `t_j = |z_j − c_j|²/ρ_j²`, `u_j = 1/(t_j − 1)` and `B(t) = exp(u)` on
//! `t < 1`, zero beyond. Polynomials in `u_j` are exactly the rational
//! factors in `(1 − t_j)` produced by differentiating the bump, so the class
//! is closed under `∂` and `∂̄`.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cplx, Real};
use crate::symbolic::expr::Side;
use crate::symbolic::poly::Poly;
use crate::symbolic::rat::{parse_rat, GaussRat, Rat};
use crate::symbolic::ring::{check_universe, Ring, RingRef};
use crate::weyl::DiffOperator;

/// Below this value of `u = 1/(t−1)` the bump underflows and is returned as 0.
const U_FLOOR: f64 = -700.0;

#[derive(Clone, Debug, PartialEq)]
pub struct TestForm {
    ring: RingRef,
    centers: Vec<GaussRat>,
    radii: Vec<Rat>,
    poly: Poly,
}

impl TestForm {
    /// The density `p · Π B(t_j)` on a [`Ring::coordinates`] universe.
    pub fn make_bump(centers: Vec<GaussRat>, radii: Vec<Rat>, p: Poly) -> Result<Self> {
        let ring = p.ring().clone();
        let d = ring.dim();
        if centers.len() != d || radii.len() != d {
            return Err(Error::InvalidArgument(format!("need {d} centers and radii")));
        }
        if radii.iter().any(|r| *r <= Rat::zero()) {
            return Err(Error::InvalidArgument("radii must be positive".into()));
        }
        if (0..d).any(|j| ring.aux_index(j).is_none()) {
            return Err(Error::InvalidArgument("universe lacks bump carriers".into()));
        }
        Ok(TestForm { ring, centers, radii, poly: p })
    }

    /// Unit bump centred at the origin in `names`, polynomial factor 1.
    pub fn unit(names: &[&str]) -> Self {
        let ring = Ring::coordinates(names);
        let d = names.len();
        TestForm {
            centers: vec![GaussRat::zero(); d],
            radii: vec![Rat::one(); d],
            poly: Poly::one(&ring),
            ring,
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.centers.len()
    }

    pub fn centers(&self) -> &[GaussRat] {
        &self.centers
    }

    pub fn radii(&self) -> &[Rat] {
        &self.radii
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Same support, different polynomial factor.
    pub fn with_poly(&self, p: Poly) -> Self {
        TestForm { poly: p, ..self.clone() }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        check_universe(&self.ring, &o.ring)?;
        if self.centers != o.centers || self.radii != o.radii {
            return Err(Error::InvalidArgument("test forms with different supports".into()));
        }
        Ok(self.with_poly(&self.poly + &o.poly))
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        self.with_poly(self.poly.scale(c))
    }

    pub fn mul_poly(&self, p: &Poly) -> Result<Self> {
        check_universe(&self.ring, p.ring())?;
        Ok(self.with_poly(&self.poly * p))
    }

    /// Exact derivative of the density along a holomorphic or
    /// anti-holomorphic coordinate variable:
    /// `∂_z[P·B] = [∂_z P + (∂_u P + P)(−u²)(z̄−c̄)/ρ²]·B`, mirrored for `∂̄`.
    pub fn diff(&self, var: usize) -> Result<Self> {
        let d = self.dim();
        let (j, conj_side) = if self.ring.is_holo(var) {
            (var, false)
        } else if self.ring.is_anti(var) {
            (var - d, true)
        } else {
            return Err(Error::InvalidArgument(format!("cannot differentiate along {}", self.ring.name(var))));
        };
        let u = self.ring.aux_index(j).expect("bump carrier");
        let c = if conj_side { self.centers[j].clone() } else { self.centers[j].conj() };
        let other = if conj_side { j } else { d + j };
        let dt = &Poly::var(&self.ring, other) - &Poly::constant(&self.ring, c);
        let inv_r2 = GaussRat::real(Rat::one() / (&self.radii[j] * &self.radii[j]));
        let up = Poly::var(&self.ring, u);
        let chain = &(&self.poly.deriv(u) + &self.poly) * &up.pow(2);
        let chain = (&chain * &dt).scale(&-inv_r2);
        Ok(self.with_poly(&self.poly.deriv(var) + &chain))
    }

    pub fn diff_side(&self, var: usize, side: Side) -> Result<Self> {
        let ok = match side {
            Side::Holo => self.ring.is_holo(var),
            Side::Anti => self.ring.is_anti(var),
        };
        if !ok {
            return Err(Error::InvalidArgument(format!("{} is not {:?}", self.ring.name(var), side)));
        }
        self.diff(var)
    }

    /// Applies a differential operator to the density.
    pub fn apply_op(&self, p: &DiffOperator) -> Result<Self> {
        check_universe(&self.ring, p.ring())?;
        let mut out = self.with_poly(Poly::zero(&self.ring));
        for (alpha, c) in p.terms() {
            let mut x = self.clone();
            for (i, &e) in alpha.iter().enumerate() {
                for _ in 0..e {
                    x = x.diff(i)?;
                }
            }
            out = out.add(&x.mul_poly(c)?)?;
        }
        Ok(out)
    }

    /// Applies the formal adjoint `Σ (−1)^{|α|} ∂^α (c_α ·)` term by term.
    pub fn apply_adjoint(&self, p: &DiffOperator) -> Result<Self> {
        check_universe(&self.ring, p.ring())?;
        let mut out = self.with_poly(Poly::zero(&self.ring));
        for (alpha, c) in p.terms() {
            let mut x = self.mul_poly(c)?;
            let mut order = 0u32;
            for (i, &e) in alpha.iter().enumerate() {
                for _ in 0..e {
                    x = x.diff(i)?;
                }
                order += e as u32;
            }
            if order % 2 == 1 {
                x = x.scale(&-GaussRat::one());
            }
            out = out.add(&x)?;
        }
        Ok(out)
    }

    /// Substitutes a numeric `λ` and prepares the density for fast evaluation.
    pub fn compile<T: Real>(&self, lambda: Complex<f64>) -> CompiledForm<T> {
        let d = self.dim();
        let lam = self.ring.lambda();
        let mut terms: Vec<CompiledTerm<T>> = Vec::new();
        for (m, c) in self.poly.terms() {
            let mut coeff = c.to_complex();
            if let Some(l) = lam {
                if m[l] > 0 {
                    coeff *= lambda.powu(m[l] as u32);
                }
            }
            let zexp: Vec<u16> = m[..d].to_vec();
            let zbexp: Vec<u16> = m[d..2 * d].to_vec();
            let uexp: Vec<u16> = m[2 * d..3 * d].to_vec();
            if let Some(t) = terms.iter_mut().find(|t| t.zexp == zexp && t.zbexp == zbexp && t.uexp == uexp) {
                t.coeff = t.coeff + cplx::<T>(coeff);
            } else {
                terms.push(CompiledTerm { zexp, zbexp, uexp, coeff: cplx::<T>(coeff) });
            }
        }
        let max_u: Vec<u16> = (0..d).map(|j| terms.iter().map(|t| t.uexp[j]).max().unwrap_or(0)).collect();
        CompiledForm {
            centers: self.centers.iter().map(|c| cplx::<T>(c.to_complex())).collect(),
            inv_rho2: self
                .radii
                .iter()
                .map(|r| {
                    let r = crate::symbolic::rat::rat_to_f64(r);
                    T::lit(1.0 / (r * r))
                })
                .collect(),
            radii: self.radii.iter().map(|r| T::lit(crate::symbolic::rat::rat_to_f64(r))).collect(),
            max_u,
            terms,
        }
    }

    /// Density value at a point (`λ` substituted).
    pub fn eval(&self, z: &[Complex<f64>], lambda: Complex<f64>) -> Complex<f64> {
        self.compile::<f64>(lambda).eval(z)
    }

    /// Splits the polynomial factor into `Σ_k outer_k ⊗ inner_k` along the
    /// coordinate groups `outer` / rest, with each piece on the full universe.
    /// Used for Fubini evaluation of product pairings.
    pub fn separate(&self, outer: &[usize]) -> Vec<(Poly, Poly)> {
        let d = self.dim();
        let is_outer = |i: usize| -> bool {
            if i < 3 * d {
                outer.contains(&(i % d))
            } else {
                true
            }
        };
        let mut pieces: Vec<(Poly, Poly)> = Vec::new();
        for (m, c) in self.poly.terms() {
            let mut mo = vec![0u16; m.len()];
            let mut mi = vec![0u16; m.len()];
            for (i, &e) in m.iter().enumerate() {
                if is_outer(i) {
                    mo[i] = e;
                } else {
                    mi[i] = e;
                }
            }
            let po = Poly::monomial(&self.ring, mo, c.clone());
            let pi = Poly::monomial(&self.ring, mi, GaussRat::one());
            pieces.push((po, pi));
        }
        // merge identical inner monomials
        let mut merged: Vec<(Poly, Poly)> = Vec::new();
        for (po, pi) in pieces {
            if let Some(x) = merged.iter_mut().find(|x| x.1 == pi) {
                x.0 = &x.0 + &po;
            } else {
                merged.push((po, pi));
            }
        }
        merged
    }

    /// One-coordinate form for coordinate `j` carrying the polynomial
    /// `piece`, which may only involve `z_j`, `z̄_j`, `u_j` and `lam`.
    pub fn restrict(&self, piece: &Poly, j: usize) -> Result<TestForm> {
        let d = self.dim();
        let name = self.ring.name(j).to_string();
        let ring1 = Ring::coordinates(&[name.as_str()]);
        let mut map = vec![None; self.ring.len()];
        map[j] = Some(0);
        map[d + j] = Some(1);
        map[2 * d + j] = Some(2);
        if let Some(l) = self.ring.lambda() {
            map[l] = ring1.lambda();
        }
        let p1 = piece.map_ring(&ring1, &map)?;
        TestForm::make_bump(vec![self.centers[j].clone()], vec![self.radii[j].clone()], p1)
    }

    pub fn to_json(&self) -> TestFormJson {
        TestFormJson {
            variables: self.ring.names()[..self.dim()].to_vec(),
            centers: self.centers.iter().map(|c| c.to_string()).collect(),
            radii: self.radii.iter().map(|r| r.to_string()).collect(),
            poly: self.poly.to_string(),
        }
    }

    pub fn from_json(j: &TestFormJson) -> Result<Self> {
        let names: Vec<&str> = j.variables.iter().map(String::as_str).collect();
        let ring = Ring::coordinates(&names);
        let centers = j.centers.iter().map(|c| GaussRat::parse(c)).collect::<Result<Vec<_>>>()?;
        let radii = j.radii.iter().map(|r| parse_rat(r)).collect::<Result<Vec<_>>>()?;
        Self::make_bump(centers, radii, Poly::parse(&ring, &j.poly)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFormJson {
    pub variables: Vec<String>,
    pub centers: Vec<String>,
    pub radii: Vec<String>,
    pub poly: String,
}

#[derive(Clone, Debug)]
struct CompiledTerm<T: Real> {
    zexp: Vec<u16>,
    zbexp: Vec<u16>,
    uexp: Vec<u16>,
    coeff: Complex<T>,
}

/// A test density with `λ` substituted, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledForm<T: Real> {
    centers: Vec<Complex<T>>,
    inv_rho2: Vec<T>,
    radii: Vec<T>,
    max_u: Vec<u16>,
    terms: Vec<CompiledTerm<T>>,
}

impl<T: Real> CompiledForm<T> {
    pub fn dim(&self) -> usize {
        self.centers.len()
    }

    pub fn center(&self, j: usize) -> Complex<T> {
        self.centers[j]
    }

    pub fn radius(&self, j: usize) -> T {
        self.radii[j]
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_zero())
    }

    /// `t_j` for the point.
    pub fn t_of(&self, j: usize, z: Complex<T>) -> T {
        (z - self.centers[j]).norm_sqr() * self.inv_rho2[j]
    }

    pub fn eval(&self, z: &[Complex<T>]) -> Complex<T> {
        let ts: Vec<T> = (0..self.dim()).map(|j| self.t_of(j, z[j])).collect();
        self.eval_with_t(z, &ts)
    }

    /// Bump factors `(−1)^n exp(n ln|u| + u)`, `n ≤ max_u[j]`, or `None`
    /// outside the support.
    fn bump_row(&self, j: usize, t: T) -> Option<Vec<T>> {
        if t >= T::one() {
            return None;
        }
        let u = T::one() / (t - T::one());
        if u.to_f64_lossy() < U_FLOOR {
            return None;
        }
        let lu = (-u).ln();
        Some(
            (0..=self.max_u[j])
                .map(|n| {
                    let v = (T::lit(n as f64) * lu + u).exp();
                    if n % 2 == 1 {
                        -v
                    } else {
                        v
                    }
                })
                .collect(),
        )
    }

    /// One-coordinate evaluation at `z = r·e^{iθ}` given `t` and the
    /// rotation `rot(m) = e^{imθ}`: each monomial `z^p z̄^q` is formed as
    /// `r^{p+q}·rot(p−q)`, so values at symmetric nodes agree exactly.
    pub fn eval_polar(&self, r: T, t: T, rot: impl Fn(i64) -> Complex<T>) -> Complex<T> {
        debug_assert_eq!(self.dim(), 1);
        let Some(row) = self.bump_row(0, t) else {
            return Complex::zero();
        };
        let mut acc = Complex::zero();
        for term in &self.terms {
            let (p, q) = (term.zexp[0], term.zbexp[0]);
            let mut v = term.coeff * row[term.uexp[0] as usize];
            if p + q > 0 {
                v = v * r.powi((p + q) as i32);
            }
            if p != q {
                v = v * rot(p as i64 - q as i64);
            }
            acc = acc + v;
        }
        acc
    }

    /// Evaluation with precomputed `t_j`. Returns exactly zero outside the support.
    pub fn eval_with_t(&self, z: &[Complex<T>], ts: &[T]) -> Complex<T> {
        let d = self.dim();
        let mut bump: Vec<Vec<T>> = Vec::with_capacity(d);
        for j in 0..d {
            match self.bump_row(j, ts[j]) {
                Some(row) => bump.push(row),
                None => return Complex::zero(),
            }
        }
        let mut acc = Complex::zero();
        for t in &self.terms {
            let mut v = t.coeff;
            for j in 0..d {
                if t.zexp[j] > 0 {
                    v = v * z[j].powu(t.zexp[j] as u32);
                }
                if t.zbexp[j] > 0 {
                    v = v * z[j].conj().powu(t.zbexp[j] as u32);
                }
                v = v * bump[j][t.uexp[j] as usize];
            }
            acc = acc + v;
        }
        acc
    }
}

/// Named forms used by the command line and the test suites.
pub fn named_form(name: &str, names: &[&str]) -> Result<TestForm> {
    let ring = Ring::coordinates(names);
    let d = names.len();
    let zero = vec![GaussRat::zero(); d];
    let one = vec![Rat::one(); d];
    let sym = |s: &str| Poly::parse(&ring, s);
    match name {
        "radial" => TestForm::make_bump(zero, one, Poly::one(&ring)),
        "radial-poly" => {
            let mut p = Poly::one(&ring);
            for j in 0..d {
                p = &p * &sym(&format!("1 + {0}*{0}b", names[j]))?;
            }
            TestForm::make_bump(zero, one, p)
        }
        "offset" => {
            let c = GaussRat::parse("1/5+1/10i")?;
            TestForm::make_bump(vec![c; d], one, Poly::one(&ring))
        }
        "poly" => {
            let mut p = Poly::one(&ring);
            for j in 0..d {
                p = &p * &sym(&format!("1 + 1/2*{0} - 1/3*i*{0}b + {0}^2 + 1/4*{0}*{0}b", names[j]))?;
            }
            TestForm::make_bump(zero, one, p)
        }
        "flat" => {
            let mut p = Poly::one(&ring);
            for j in 0..d {
                p = &p * &sym(&format!("{0}^2*{0}b^2", names[j]))?;
            }
            TestForm::make_bump(zero, one, p)
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown form `{other}` (radial, radial-poly, offset, poly, flat)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_values() {
        let f = TestForm::unit(&["z"]);
        let l = Complex::new(0.0, 0.0);
        let v = f.eval(&[Complex::new(0.0, 0.0)], l);
        assert!((v.re - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(f.eval(&[Complex::new(1.0, 0.0)], l), Complex::zero());
        assert_eq!(f.eval(&[Complex::new(0.6, 0.8)], l), Complex::zero());
    }

    #[test]
    fn dbar_vanishes_at_centre_and_partials_commute() {
        let f = TestForm::unit(&["z"]);
        let db = f.diff(1).unwrap();
        assert_eq!(db.eval(&[Complex::new(0.0, 0.0)], Complex::zero()), Complex::zero());
        let a = f.diff(0).unwrap().diff(1).unwrap();
        let b = f.diff(1).unwrap().diff(0).unwrap();
        assert_eq!(a, b);
    }
}
