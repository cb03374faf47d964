//! Fiber integrals of `f = z^k` and their expansions in
//! `|s|^{2r} s^m s̄^{m′} (log|s|)^j`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::expr::Side;
use crate::testform::TestForm;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    /// `r ∈ [0, 1)` as `(numerator, denominator)`.
    pub r: (i64, i64),
    pub m: u32,
    pub m_prime: u32,
    pub j: u32,
    pub coeff: Complex<f64>,
}

impl ExpansionTerm {
    pub fn r_f64(&self) -> f64 {
        self.r.0 as f64 / self.r.1 as f64
    }

    /// Total homogeneity `2r + m + m′` in `|s|`.
    pub fn degree(&self) -> f64 {
        2.0 * self.r_f64() + (self.m + self.m_prime) as f64
    }

    fn key(&self) -> (i64, i64, u32, u32, u32) {
        (self.r.0, self.r.1, self.m, self.m_prime, self.j)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionModel {
    pub terms: Vec<ExpansionTerm>,
    /// Terms of degree above this bound are not represented.
    pub order: u32,
}

impl ExpansionModel {
    pub fn coeff(&self, r: (i64, i64), m: u32, m_prime: u32, j: u32) -> Complex<f64> {
        let r = reduce(r);
        self.terms
            .iter()
            .find(|t| t.key() == (r.0, r.1, m, m_prime, j))
            .map(|t| t.coeff)
            .unwrap_or_default()
    }

    /// `r = 0, j ≥ 1 ⟹ m ≥ 1 and m′ ≥ 1` for every term whose coefficient
    /// exceeds `tol`.
    pub fn structural_ok(&self, tol: f64) -> bool {
        self.terms
            .iter()
            .filter(|t| t.coeff.norm() > tol)
            .all(|t| !(t.r.0 == 0 && t.j >= 1) || (t.m >= 1 && t.m_prime >= 1))
    }

    /// Distinct values of `r` carried by terms above `tol`.
    pub fn r_values(&self, tol: f64) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = self.terms.iter().filter(|t| t.coeff.norm() > tol).map(|t| t.r).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn eval(&self, s: Complex<f64>) -> Complex<f64> {
        let a = s.norm();
        self.terms
            .iter()
            .map(|t| {
                t.coeff
                    * a.powf(2.0 * t.r_f64())
                    * s.powu(t.m)
                    * s.conj().powu(t.m_prime)
                    * a.ln().powi(t.j as i32)
            })
            .sum()
    }

    /// Largest coefficient difference against another model over the union of terms.
    pub fn max_diff(&self, o: &ExpansionModel) -> f64 {
        let mut worst: f64 = 0.0;
        for t in self.terms.iter().chain(&o.terms) {
            let d = self.coeff(t.r, t.m, t.m_prime, t.j) - o.coeff(t.r, t.m, t.m_prime, t.j);
            worst = worst.max(d.norm());
        }
        worst
    }
}

fn reduce(r: (i64, i64)) -> (i64, i64) {
    let x = Ratio::new(r.0, r.1);
    (*x.numer(), *x.denom())
}

/// Lattice index of `z^p z̄^q` under `s = z^k` when `p ≡ q (mod k)`.
fn lattice_point(k: u32, p: u32, q: u32) -> ((i64, i64), u32, u32) {
    let qq = p.min(q);
    let base = qq / k;
    let r = reduce(((qq % k) as i64, k as i64));
    (r, base + (p - qq) / k, base + (q - qq) / k)
}

/// `∂^p ∂̄^q φ(0) / (p! q!)` for a one-coordinate form, computed from exact
/// derivatives of the density.
pub fn taylor_coeff(form: &TestForm, p: u32, q: u32) -> Result<Complex<f64>> {
    let mut g = form.clone();
    for _ in 0..p {
        g = g.diff_side(0, Side::Holo)?;
    }
    for _ in 0..q {
        g = g.diff_side(1, Side::Anti)?;
    }
    let fact = |n: u32| (1..=n).map(|i| i as f64).product::<f64>();
    Ok(g.eval(&[Complex::new(0.0, 0.0)], Complex::new(0.0, 0.0)) / (fact(p) * fact(q)))
}

/// Symbolic expansion of `Θ(s) = Σ_{z^k = s} φ(z)`: averaging the Taylor
/// series of `φ` over the k-th roots of unity keeps `k·a_{pq}` for
/// `p ≡ q (mod k)`.
pub fn fiber_oracle(k: u32, form: &TestForm, order: u32) -> Result<ExpansionModel> {
    let mut terms = Vec::new();
    let max_pq = k * order + k;
    for p in 0..=max_pq {
        for q in 0..=max_pq {
            if (p as i64 - q as i64).rem_euclid(k as i64) != 0 {
                continue;
            }
            let (r, m, mp) = lattice_point(k, p, q);
            let t = ExpansionTerm { r, m, m_prime: mp, j: 0, coeff: Complex::new(0.0, 0.0) };
            if t.degree() > order as f64 + 1e-12 {
                continue;
            }
            let a = taylor_coeff(form, p, q)?;
            terms.push(ExpansionTerm { coeff: a * k as f64, ..t });
        }
    }
    terms.sort_by(|a, b| a.degree().total_cmp(&b.degree()).then(a.key().cmp(&b.key())));
    Ok(ExpansionModel { terms, order })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiberFit {
    pub fitted: ExpansionModel,
    pub oracle: ExpansionModel,
    pub condition: f64,
    pub max_diff: f64,
}

/// `Θ(s) = Σ_{z^k = s} φ(z)`.
fn theta(k: u32, form: &TestForm, s: Complex<f64>) -> Complex<f64> {
    let cf = form.compile::<f64>(Complex::new(0.0, 0.0));
    let rho = s.norm().powf(1.0 / k as f64);
    let th = s.arg() / k as f64;
    (0..k)
        .map(|j| {
            let z = Complex::from_polar(rho, th + 2.0 * std::f64::consts::PI * j as f64 / k as f64);
            cf.eval(&[z])
        })
        .sum()
}

const FIT_EXTRA: u32 = 6;

/// Fits the lattice model to samples of `Θ` and returns it next to the
/// symbolic oracle. Each angular frequency `ℓ = m − m′` is separated by a
/// discrete Fourier transform over the rays, then `Θ_ℓ(ρ)` is fitted
/// against `ρ^{|ℓ|} w^n`, `w = ρ^{2/k}`, on Chebyshev nodes.
pub fn fiber_expansion(k: u32, form: &TestForm, order: u32) -> Result<FiberFit> {
    if k == 0 || k > 4 || form.dim() != 1 {
        return Err(Error::InvalidArgument("fiber expansions cover z^k, 1 ≤ k ≤ 4".into()));
    }
    let rays = 16usize;
    let w_max = 0.05f64;
    let deg = (k * order / 2 + FIT_EXTRA) as usize;
    let npts = 2 * deg + 8;
    let ws: Vec<f64> = (0..npts)
        .map(|i| 0.5 * w_max * (1.0 - ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * npts) as f64).cos()))
        .collect();
    // samples[i][ray]
    let samples: Vec<Vec<Complex<f64>>> = ws
        .iter()
        .map(|&w| {
            let rho = w.powf(k as f64 / 2.0);
            (0..rays)
                .map(|a| theta(k, form, Complex::from_polar(rho, 2.0 * std::f64::consts::PI * a as f64 / rays as f64)))
                .collect()
        })
        .collect();
    let lmax = (rays / 2 - 1) as i64;
    let mut terms = Vec::new();
    let mut condition: f64 = 1.0;
    for l in -lmax..=lmax {
        let al = l.unsigned_abs() as u32;
        if al > order {
            continue;
        }
        let g: Vec<Complex<f64>> = samples
            .iter()
            .map(|row| {
                row
                    .iter()
                    .enumerate()
                    .map(|(a, v)| v * Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * (l * a as i64) as f64 / rays as f64))
                    .sum::<Complex<f64>>()
                    / rays as f64
            })
            .collect();
        let cols = deg + 1;
        let mut a = DMatrix::<Complex<f64>>::zeros(npts, cols);
        for (i, &w) in ws.iter().enumerate() {
            for c in 0..cols {
                a[(i, c)] = Complex::new((w / w_max).powf(c as f64 + (k * al) as f64 / 2.0), 0.0);
            }
        }
        let svd = a.svd(true, true);
        let sv = &svd.singular_values;
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        condition = condition.max(smax / smin);
        let x = svd
            .solve(&DVector::from_vec(g), 0.0)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        for n in 0..cols as u32 {
            let coeff = x[n as usize] / w_max.powf(n as f64 + (k * al) as f64 / 2.0);
            // ρ^{|ℓ|} w^n e^{iℓ arg s} is z^p z̄^q with p − q = kℓ, p + q = k|ℓ| + 2n
            let (p, q) = if l >= 0 { (n + k * al, n) } else { (n, n + k * al) };
            let (r, m, mp) = lattice_point(k, p, q);
            let t = ExpansionTerm { r, m, m_prime: mp, j: 0, coeff };
            if t.degree() <= order as f64 + 1e-12 {
                terms.push(t);
            }
        }
    }
    terms.sort_by(|a, b| a.degree().total_cmp(&b.degree()).then(a.key().cmp(&b.key())));
    let fitted = ExpansionModel { terms, order };
    let oracle = fiber_oracle(k, form, order)?;
    let max_diff = fitted.max_diff(&oracle);
    Ok(FiberFit { fitted, oracle, condition, max_diff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::poly::Poly;
    use crate::symbolic::ring::Ring;

    #[test]
    fn lattice_examples() {
        assert_eq!(lattice_point(2, 1, 1), ((1, 2), 0, 0));
        assert_eq!(lattice_point(2, 2, 0), ((0, 1), 1, 0));
        assert_eq!(lattice_point(1, 3, 2), ((0, 1), 3, 2));
    }

    #[test]
    fn taylor_of_polynomial_factor() {
        let r = Ring::coordinates(&["z"]);
        let form = TestForm::unit(&["z"]).with_poly(Poly::parse(&r, "z*zb").unwrap());
        let e = (-1.0f64).exp();
        assert!((taylor_coeff(&form, 1, 1).unwrap().re - e).abs() < 1e-15);
        assert!(taylor_coeff(&form, 1, 0).unwrap().norm() < 1e-15);
    }
}
