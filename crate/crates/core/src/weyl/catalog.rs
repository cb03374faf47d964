//! Bernstein data `(f, b, P)` with `P f^{λ+1} = b(λ) f^λ`, certified symbolically.

use num_complex::Complex;
use num_traits::Signed;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::operator::{DiffOperator, OpTermJson};
use crate::error::{Error, Result};
use crate::scalar::cplx;
use crate::symbolic::expr::{Exponent, PowerLogExpr, Side};
use crate::symbolic::field::{DiffField, RatFn};
use crate::symbolic::poly::Poly;
use crate::symbolic::rat::{rat, GaussRat, Rat};
use crate::symbolic::ring::{Ring, RingRef};

pub const CATALOG_VERSION: &str = "1";

#[derive(Clone, Debug)]
pub struct BernsteinDatum {
    pub name: String,
    pub ring: RingRef,
    pub f: Poly,
    /// Roots of `b` with multiplicities; `b = Π (λ − root)^mult` is monic.
    pub b_roots: Vec<(Rat, u32)>,
    pub p: DiffOperator,
}

/// Outcome of an exact check: passed iff the residual is the zero expression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    pub residual: String,
}

impl Certificate {
    pub fn from_residual<T: std::fmt::Display>(name: impl Into<String>, is_zero: bool, residual: &T) -> Self {
        Certificate {
            name: name.into(),
            passed: is_zero,
            residual: if is_zero { "0".into() } else { residual.to_string() },
        }
    }
}

fn lambda_poly(ring: &RingRef) -> Poly {
    Poly::var(ring, ring.lambda().expect("coordinate universe has lam"))
}

impl BernsteinDatum {
    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    /// `b(λ)` expanded.
    pub fn b(&self) -> Poly {
        let lam = lambda_poly(&self.ring);
        let mut acc = Poly::one(&self.ring);
        for (r, m) in &self.b_roots {
            let fac = &lam - &Poly::constant(&self.ring, GaussRat::real(r.clone()));
            acc = &acc * &fac.pow(*m);
        }
        acc
    }

    /// `B_M(λ) = b(λ) b(λ+1) … b(λ+M−1)`.
    pub fn b_m(&self, m: u32) -> Poly {
        let b = self.b();
        let mut acc = Poly::one(&self.ring);
        for j in 0..m {
            acc = &acc * &b.shift_lambda(&GaussRat::int(j as i64));
        }
        acc
    }

    /// Roots of `B_M` (all rational).
    pub fn b_m_roots(&self, m: u32) -> Vec<Rat> {
        let mut out = Vec::new();
        for j in 0..m {
            for (r, _) in &self.b_roots {
                out.push(r - Rat::from_integer(j.into()));
            }
        }
        out
    }

    fn carrier_power(&self, f: &Poly, shift: i64) -> PowerLogExpr<RatFn> {
        let fk = RatFn::from_poly(f.clone());
        let one = fk.one_like();
        PowerLogExpr::with_carrier(fk).term(one, Exponent::lambda_plus(GaussRat::int(shift)), Exponent::zero())
    }

    /// Exact residual `P(f^{λ+1}) − b(λ) f^λ`.
    pub fn residual(&self) -> Result<PowerLogExpr<RatFn>> {
        self.residual_iterated(1, &self.p, &self.b())
    }

    fn residual_iterated(&self, m: u32, pm: &DiffOperator, bm: &Poly) -> Result<PowerLogExpr<RatFn>> {
        let lhs = pm.apply(&self.carrier_power(&self.f, m as i64))?;
        let rhs = self.carrier_power(&self.f, 0).scale_poly(bm);
        Ok(lhs.sub(&rhs))
    }

    pub fn verify(&self) -> Result<Certificate> {
        let r = self.residual()?;
        Ok(Certificate::from_residual(format!("bernstein[{}]", self.name), r.is_zero(), &r))
    }

    /// `(P_M, B_M)` with `P_M = P(λ)∘P(λ+1)∘…∘P(λ+M−1)`.
    pub fn iterate(&self, m: u32) -> Result<(DiffOperator, Poly)> {
        if m == 0 {
            return Err(Error::InvalidArgument("M must be at least 1".into()));
        }
        let mut pm = self.p.clone();
        for j in 1..m {
            pm = pm.try_compose(&self.p.shift_lambda(&GaussRat::int(j as i64)))?;
        }
        Ok((pm, self.b_m(m)))
    }

    /// Certificate for `P_M(f^{λ+M}) = B_M(λ) f^λ`.
    pub fn verify_iterated(&self, m: u32) -> Result<Certificate> {
        let (pm, bm) = self.iterate(m)?;
        let r = self.residual_iterated(m, &pm, &bm)?;
        Ok(Certificate::from_residual(format!("bernstein[{}] M={m}", self.name), r.is_zero(), &r))
    }

    /// Anti-holomorphic mirror datum `(f̄, b, P̄)`.
    pub fn conjugate(&self) -> Self {
        BernsteinDatum {
            name: format!("conj({})", self.name),
            ring: self.ring.clone(),
            f: self.f.conj(),
            b_roots: self.b_roots.clone(),
            p: self.p.conjugate(),
        }
    }

    /// Re-extracts the roots of the expanded `b` exactly and checks that they
    /// agree with the stored factored form and are all strictly negative.
    pub fn check_roots(&self) -> Certificate {
        let l = self.ring.lambda().expect("lam");
        let (found, rest) = self.b().rational_roots_in(l);
        let mut a = found.clone();
        let mut b = self.b_roots.clone();
        a.sort();
        b.sort();
        let ok = rest.is_constant() && a == b && found.iter().all(|(r, _)| r.is_negative());
        Certificate {
            name: format!("roots[{}]", self.name),
            passed: ok,
            residual: if ok { "0".into() } else { format!("roots {found:?}, cofactor {rest}") },
        }
    }

    /// Largest relative mismatch of both sides of the functional equation at
    /// `samples` random points with random `λ`.
    pub fn numeric_check<R: Rng>(&self, rng: &mut R, samples: usize, guard: f64) -> Result<f64> {
        let lhs = self.p.apply(&self.carrier_power(&self.f, 1))?;
        let rhs = self.carrier_power(&self.f, 0).scale_poly(&self.b());
        let d = self.dim();
        let mut worst: f64 = 0.0;
        let mut done = 0;
        while done < samples {
            let mut vals = vec![Complex::new(0.0, 0.0); self.ring.len()];
            for j in 0..d {
                let z = Complex::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
                vals[j] = z;
                vals[d + j] = z.conj();
            }
            let lam = Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
            let fv = self.f.eval(&vals);
            if fv.norm() < 1e-3 {
                continue;
            }
            let a: Complex<f64> = lhs.eval(&vals, lam, guard)?;
            let b: Complex<f64> = rhs.eval(&vals, lam, guard)?;
            worst = worst.max((a - b).norm() / b.norm().max(1e-300));
            done += 1;
        }
        Ok(worst)
    }

    /// `B_M(λ)` at a numeric point.
    pub fn b_at(&self, m: u32, lam: Complex<f64>) -> Complex<f64> {
        let mut acc = Complex::new(1.0, 0.0);
        for j in 0..m {
            for (r, mult) in &self.b_roots {
                let root = cplx::<f64>(GaussRat::real(r.clone()).to_complex());
                acc *= (lam + j as f64 - root).powu(*mult);
            }
        }
        acc
    }
}

fn holo_multi(ring: &RingRef, orders: &[u16]) -> Vec<u16> {
    let mut m = vec![0; ring.len()];
    m[..orders.len()].copy_from_slice(orders);
    m
}

/// `f = z`, `b = λ+1`, `P = ∂`.
pub fn datum_z() -> BernsteinDatum {
    datum_z_power(1)
}

/// `f = z^k`, `b = Π_{i=1}^k (λ + i/k)`, `P = k^{−k} ∂^k`.
pub fn datum_z_power(k: u16) -> BernsteinDatum {
    let r = Ring::coordinates(&["z"]);
    let f = Poly::var(&r, 0).pow(k as u32);
    let c = GaussRat::frac(1, (k as i64).pow(k as u32));
    let p = DiffOperator::from_terms(&r, Side::Holo, [(Poly::constant(&r, c), holo_multi(&r, &[k]))]).expect("valid");
    BernsteinDatum {
        name: if k == 1 { "z".into() } else { format!("z^{k}") },
        ring: r,
        f,
        b_roots: (1..=k as i64).map(|i| (rat(-i, k as i64), 1)).collect(),
        p,
    }
}

/// `f = z1·z2`, `b = (λ+1)²`, `P = ∂1∂2`.
pub fn datum_z1z2() -> BernsteinDatum {
    let r = Ring::coordinates(&["z1", "z2"]);
    let f = &Poly::var(&r, 0) * &Poly::var(&r, 1);
    let p = DiffOperator::from_terms(&r, Side::Holo, [(Poly::one(&r), holo_multi(&r, &[1, 1]))]).expect("valid");
    BernsteinDatum { name: "z1*z2".into(), ring: r, f, b_roots: vec![(rat(-1, 1), 2)], p }
}

/// `f = z1² + z2²`, `b = (λ+1)²`, `P = ¼(∂1² + ∂2²)`.
pub fn datum_sum_squares() -> BernsteinDatum {
    let r = Ring::coordinates(&["z1", "z2"]);
    let f = &Poly::var(&r, 0).pow(2) + &Poly::var(&r, 1).pow(2);
    let q = Poly::constant(&r, GaussRat::frac(1, 4));
    let p = DiffOperator::from_terms(
        &r,
        Side::Holo,
        [(q.clone(), holo_multi(&r, &[2, 0])), (q, holo_multi(&r, &[0, 2]))],
    )
    .expect("valid");
    BernsteinDatum { name: "z1^2+z2^2".into(), ring: r, f, b_roots: vec![(rat(-1, 1), 2)], p }
}

/// The shipped catalog: `z`, `z^2..z^4`, `z1*z2`, `z1^2+z2^2`.
pub fn catalog() -> Vec<BernsteinDatum> {
    let mut out = vec![datum_z()];
    for k in 2..=4 {
        out.push(datum_z_power(k));
    }
    out.push(datum_z1z2());
    out.push(datum_sum_squares());
    out
}

pub fn lookup(name: &str) -> Result<BernsteinDatum> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    catalog()
        .into_iter()
        .find(|d| d.name == key)
        .ok_or_else(|| Error::InvalidArgument(format!("`{name}` is not in the Bernstein catalog")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatumJson {
    pub name: String,
    pub variables: Vec<String>,
    pub f: String,
    /// `(root numerator, root denominator, multiplicity)`.
    pub b_factored: Vec<(i64, i64, u32)>,
    /// `(coefficient, multi-index over the holomorphic variables)`.
    #[serde(rename = "P")]
    pub p: Vec<OpTermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogJson {
    pub version: String,
    pub entries: Vec<DatumJson>,
}

impl BernsteinDatum {
    pub fn to_json(&self) -> DatumJson {
        let d = self.dim();
        let variables = self.ring.names()[..d].to_vec();
        let b_factored = self
            .b_roots
            .iter()
            .map(|(r, m)| {
                let n: i64 = r.numer().try_into().expect("small root");
                let q: i64 = r.denom().try_into().expect("small root");
                (n, q, *m)
            })
            .collect();
        let p = self
            .p
            .to_json_terms()
            .into_iter()
            .map(|OpTermJson(c, m)| OpTermJson(c, m[..d].to_vec()))
            .collect();
        DatumJson { name: self.name.clone(), variables, f: self.f.to_string(), b_factored, p }
    }

    pub fn from_json(j: &DatumJson) -> Result<Self> {
        let names: Vec<&str> = j.variables.iter().map(String::as_str).collect();
        let ring = Ring::coordinates(&names);
        let f = Poly::parse(&ring, &j.f)?;
        let mut b_roots = Vec::new();
        for &(n, q, m) in &j.b_factored {
            if q == 0 {
                return Err(Error::Parse("zero root denominator".into()));
            }
            b_roots.push((rat(n, q), m));
        }
        let terms: Vec<OpTermJson> = j
            .p
            .iter()
            .map(|OpTermJson(c, m)| OpTermJson(c.clone(), holo_multi(&ring, m)))
            .collect();
        let p = DiffOperator::from_json_terms(&ring, Side::Holo, &terms)?;
        Ok(BernsteinDatum { name: j.name.clone(), ring, f, b_roots, p })
    }
}

pub fn catalog_json() -> CatalogJson {
    CatalogJson { version: CATALOG_VERSION.into(), entries: catalog().iter().map(|d| d.to_json()).collect() }
}

pub fn catalog_from_json(c: &CatalogJson) -> Result<Vec<BernsteinDatum>> {
    c.entries.iter().map(BernsteinDatum::from_json).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_round_trips_through_json() {
        let j = catalog_json();
        let s = serde_json::to_string(&j).unwrap();
        let back: CatalogJson = serde_json::from_str(&s).unwrap();
        let data = catalog_from_json(&back).unwrap();
        for (a, b) in data.iter().zip(catalog()) {
            assert_eq!(a.f, b.f);
            assert_eq!(a.p, b.p);
            assert_eq!(a.b(), b.b());
        }
    }

    #[test]
    fn z_datum_verifies() {
        assert!(datum_z().verify().unwrap().passed);
    }
}
