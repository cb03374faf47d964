//! Cutoff, full-support, boundary and nested product integrals for catalog
//! carriers `f = z^k` and coordinate products `f = Π z_j^{k_j}`.
//!
//! Pairing convention: densities are integrated against `(−2i)^d` times
//! Lebesgue measure.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::gauss::{adaptive, AdaptiveOpts, QuadResult};
use super::polar::{angular, breakpoints, polar_band, radial_support, RadialWeight};
use crate::error::{Error, Result};
use crate::symbolic::expr::{Exponent, LogSymbol, PowerLogExpr};
use crate::symbolic::field::DiffField;
use crate::symbolic::ratfn::RatFn;
use crate::symbolic::poly::Poly;
use crate::symbolic::rat::GaussRat;
use crate::testform::TestForm;

/// `dz ∧ dz̄ = −2i dx ∧ dy`.
pub const PAIRING_FACTOR: Complex<f64> = Complex { re: 0.0, im: -2.0 };

pub fn pairing_factor(d: usize) -> Complex<f64> {
    PAIRING_FACTOR.powu(d as u32)
}

/// `|f|^{2λ} f^{−N} f̄^{M} (log|f|²)^q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub lambda: Complex<f64>,
    pub n: i64,
    pub m: i64,
    pub q: u32,
}

impl Weight {
    pub fn new(lambda: Complex<f64>, n: i64) -> Self {
        Weight { lambda, n, m: 0, q: 0 }
    }

    pub fn with_log(self, q: u32) -> Self {
        Weight { q, ..self }
    }

    pub fn with_conj_power(self, m: i64) -> Self {
        Weight { m, ..self }
    }

    /// Radial weight and angular frequency for one factor `z^k`.
    fn factor(&self, k: u32, q: u32) -> (RadialWeight, i64) {
        let k = k as i64;
        let power = self.lambda * (2.0 * k as f64) + (self.m - self.n) as f64 * k as f64;
        (RadialWeight { power, log_scale: 2.0 * k as f64, q }, k * (self.n + self.m))
    }

    /// The same weight as a symbolic expression in the universe of `f`
    /// (exponents affine in `lam`; evaluate with the weight's `λ`).
    pub fn to_expr(&self, f: &Poly) -> PowerLogExpr<RatFn> {
        let fk = RatFn::from_poly(f.clone());
        let fb = fk.conj();
        let logs = vec![LogSymbol { name: "f".into(), g: fk.clone(), gbar: fb.clone() }];
        let e = PowerLogExpr::new(fk.clone(), fb, logs);
        let one = fk.one_like();
        e.term_with_logs(
            one,
            Exponent::lambda_plus(GaussRat::int(-self.n)),
            Exponent::lambda_plus(GaussRat::int(self.m)),
            vec![self.q],
        )
    }
}

/// Carriers the polar engines handle exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Carrier {
    /// `f = z^k` in one coordinate.
    Power(u32),
    /// `f = Π_j z_j^{k_j}`.
    Product(Vec<u32>),
}

impl Carrier {
    pub fn classify(f: &Poly) -> Result<Carrier> {
        let ring = f.ring();
        let d = ring.dim();
        let mut terms = f.terms();
        let (m, c) = terms
            .next()
            .ok_or_else(|| Error::InvalidArgument("zero carrier".into()))?;
        if terms.next().is_some() || !c.is_one() || m[d..].iter().any(|&e| e > 0) {
            return Err(Error::InvalidArgument(format!(
                "carrier {f} is not a monomial in the coordinates; only z^k and coordinate products are integrated"
            )));
        }
        let ks: Vec<u32> = m[..d].iter().map(|&e| e as u32).collect();
        if ks.iter().any(|&k| k == 0) {
            return Err(Error::InvalidArgument("every coordinate must divide the carrier".into()));
        }
        Ok(if d == 1 { Carrier::Power(ks[0]) } else { Carrier::Product(ks) })
    }

    pub fn exponents(&self) -> Vec<u32> {
        match self {
            Carrier::Power(k) => vec![*k],
            Carrier::Product(ks) => ks.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadOpts {
    /// Relative tolerance of the radial integrals.
    pub tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts { tol: 1e-10, abs_tol: 1e-15, max_panels: 4000 }
    }
}

impl QuadOpts {
    fn adaptive(&self) -> AdaptiveOpts {
        AdaptiveOpts { abs_tol: self.abs_tol, rel_tol: self.tol, max_panels: self.max_panels }
    }
}

fn check_budget(r: QuadResult, opts: &QuadOpts) -> Result<QuadResult> {
    let target = 100.0 * opts.abs_tol.max(opts.tol * r.value.norm());
    if r.error > target && r.error > 1e-12 * r.value.norm().max(1.0) {
        return Err(Error::BudgetExceeded { estimate: r.value, error: r.error });
    }
    Ok(r)
}

/// `∫_{r_a ≤ |z| ≤ r_b} w ξ` for a one-coordinate form and carrier `z^k`,
/// radial band given in `|z|`.
fn band_1d(form: &TestForm, k: u32, w: &Weight, r_a: f64, r_b: f64, opts: &QuadOpts) -> QuadResult {
    let cf = form.compile::<f64>(w.lambda);
    let (rw, freq) = w.factor(k, w.q);
    polar_band(&cf, &rw, freq, r_a, r_b, opts.adaptive()).scale(PAIRING_FACTOR)
}

/// Per-coordinate pieces of a product pairing: `Σ_t c_t Π_j ξ_{t,j}`, where
/// `ξ_{t,j}` is a one-coordinate form. `lam` powers are folded into `c_t`.
struct Separated {
    terms: Vec<(Complex<f64>, Vec<usize>)>,
    forms: Vec<Vec<TestForm>>,
}

fn separate(form: &TestForm, lambda: Complex<f64>) -> Result<Separated> {
    let ring = form.ring().clone();
    let d = form.dim();
    let lam = ring.lambda();
    let mut forms: Vec<Vec<TestForm>> = vec![Vec::new(); d];
    let mut keys: Vec<Vec<Vec<u16>>> = vec![Vec::new(); d];
    let mut terms = Vec::new();
    for (m, c) in form.poly().terms() {
        let mut coeff = c.to_complex();
        if let Some(l) = lam {
            coeff *= lambda.powu(m[l] as u32);
        }
        let mut idx = Vec::with_capacity(d);
        for j in 0..d {
            let key = vec![m[j], m[d + j], m[2 * d + j]];
            let pos = match keys[j].iter().position(|k| *k == key) {
                Some(p) => p,
                None => {
                    let mut mono = vec![0u16; ring.len()];
                    mono[j] = key[0];
                    mono[d + j] = key[1];
                    mono[2 * d + j] = key[2];
                    let piece = Poly::monomial(&ring, mono, GaussRat::one());
                    forms[j].push(form.restrict(&piece, j)?);
                    keys[j].push(key);
                    forms[j].len() - 1
                }
            };
            idx.push(pos);
        }
        terms.push((coeff, idx));
    }
    Ok(Separated { terms, forms })
}

/// Expands `(Σ_j 2k_j ln r_j)^q` into per-factor log powers with binomial weights.
fn log_splits(q: u32, d: usize) -> Vec<(f64, Vec<u32>)> {
    fn rec(q: u32, d: usize, acc: &mut Vec<u32>, out: &mut Vec<(f64, Vec<u32>)>) {
        if d == 1 {
            acc.push(q);
            let mut coef = 1.0;
            let mut rest = acc.iter().sum::<u32>();
            for &e in acc.iter() {
                coef *= binom(rest, e);
                rest -= e;
            }
            out.push((coef, acc.clone()));
            acc.pop();
            return;
        }
        for e in 0..=q {
            acc.push(e);
            rec(q - e, d - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(q, d, &mut Vec::new(), &mut out);
    out
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Fubini evaluation over independent factors: the cutoff for factor `j` is
/// `|z_j|^{k_j} ≥ eps[j]` (0 for no cutoff).
pub fn nested_product_integrate(
    ks: &[u32],
    weights: &[Weight],
    form: &TestForm,
    eps: &[f64],
    opts: &QuadOpts,
) -> Result<QuadResult> {
    let d = form.dim();
    if ks.len() != d || weights.len() != d || eps.len() != d {
        return Err(Error::InvalidArgument("one carrier, weight and cutoff per coordinate".into()));
    }
    let lambda = weights[0].lambda;
    let sep = separate(form, lambda)?;
    let mut total = QuadResult::zero();
    // cache[j][piece][logpower]
    let mut cache: Vec<Vec<Vec<Option<QuadResult>>>> = (0..d)
        .map(|j| vec![vec![None; weights[j].q as usize + 1]; sep.forms[j].len()])
        .collect();
    let mut get = |j: usize, p: usize, q: u32| -> QuadResult {
        if let Some(r) = cache[j][p][q as usize] {
            return r;
        }
        let wj = Weight { q, ..weights[j] };
        let r_a = if eps[j] > 0.0 { eps[j].powf(1.0 / ks[j] as f64) } else { 0.0 };
        let r = band_1d(&sep.forms[j][p], ks[j], &wj, r_a, f64::INFINITY, opts);
        cache[j][p][q as usize] = Some(r);
        r
    };
    for (c, idx) in &sep.terms {
        // every factor carries its own log power; weights[j].q is the power for factor j
        let mut prod = QuadResult { value: *c, error: 0.0, evals: 0 };
        for j in 0..d {
            let r = get(j, idx[j], weights[j].q);
            prod = QuadResult {
                value: prod.value * r.value,
                error: prod.error * r.value.norm() + prod.value.norm() * r.error,
                evals: prod.evals + r.evals,
            };
        }
        total = total.add(prod);
    }
    Ok(total)
}

/// `∫_{|f| ≥ ε} |f|^{2λ} f^{−N} f̄^M (log|f|²)^q ξ` (`ε = 0` integrates the
/// full support and requires absolute integrability).
pub fn integrate_cutoff(f: &Poly, w: &Weight, form: &TestForm, eps: f64, opts: &QuadOpts) -> Result<QuadResult> {
    match Carrier::classify(f)? {
        Carrier::Power(k) => {
            let r_a = if eps > 0.0 { eps.powf(1.0 / k as f64) } else { 0.0 };
            check_budget(band_1d(form, k, w, r_a, f64::INFINITY, opts), opts)
        }
        Carrier::Product(ks) => {
            if eps == 0.0 {
                let mut total = QuadResult::zero();
                for (coef, qs) in log_splits(w.q, ks.len()) {
                    let ws: Vec<Weight> = qs.iter().map(|&q| Weight { q, ..*w }).collect();
                    let r = nested_product_integrate(&ks, &ws, form, &vec![0.0; ks.len()], opts)?;
                    total = total.add(r.scale(Complex::new(coef, 0.0)));
                }
                return check_budget(total, opts);
            }
            product_cutoff(&ks, w, form, eps, opts)
        }
    }
}

/// Region `{ε_lo ≤ |f| ≤ ε_hi}` for `f = z^k`.
pub fn integrate_band(f: &Poly, w: &Weight, form: &TestForm, eps_lo: f64, eps_hi: f64, opts: &QuadOpts) -> Result<QuadResult> {
    match Carrier::classify(f)? {
        Carrier::Power(k) => {
            let e = 1.0 / k as f64;
            Ok(band_1d(form, k, w, eps_lo.powf(e), eps_hi.powf(e), opts))
        }
        Carrier::Product(_) => Err(Error::InvalidArgument("bands are implemented for one coordinate".into())),
    }
}

/// Coupled region `{Π r_j^{k_j} ≥ ε}` for two coordinates:
/// outer integral over `r_1`, inner over `r_2 ≥ (ε / r_1^{k_1})^{1/k_2}`.
fn product_cutoff(ks: &[u32], w: &Weight, form: &TestForm, eps: f64, opts: &QuadOpts) -> Result<QuadResult> {
    if ks.len() != 2 {
        return Err(Error::InvalidArgument("coupled cutoff regions are implemented for two coordinates".into()));
    }
    let sep = separate(form, w.lambda)?;
    let compiled: Vec<Vec<_>> = sep
        .forms
        .iter()
        .map(|fs| fs.iter().map(|f| f.compile::<f64>(w.lambda)).collect())
        .collect();
    let mut total = QuadResult::zero();
    let ang_tol = (opts.tol * 1e-2).max(1e-14);
    let ao = opts.adaptive();
    for (coef, qs) in log_splits(w.q, 2) {
        let (w1, f1) = w.factor(ks[0], qs[0]);
        let (w2, f2) = w.factor(ks[1], qs[1]);
        for (c, idx) in &sep.terms {
            let c1 = &compiled[0][idx[0]];
            let c2 = &compiled[1][idx[1]];
            let (lo1, hi1) = radial_support(c1);
            let (lo2, hi2) = radial_support(c2);
            let r1_min = (eps / hi2.powi(ks[1] as i32)).powf(1.0 / ks[0] as f64).max(lo1);
            if r1_min >= hi1 {
                continue;
            }
            let bp1 = breakpoints(r1_min, hi1, &[]);
            let outer = adaptive::<f64>(
                |r1| {
                    let a1 = w1.eval(r1) * angular(c1, r1, f1, ang_tol) * r1;
                    if a1 == Complex::zero() {
                        return a1;
                    }
                    let r2_min = (eps / r1.powi(ks[0] as i32)).powf(1.0 / ks[1] as f64).max(lo2);
                    if r2_min >= hi2 {
                        return Complex::zero();
                    }
                    let bp2 = breakpoints(r2_min, hi2, &[]);
                    let inner = adaptive::<f64>(|r2| w2.eval(r2) * angular(c2, r2, f2, ang_tol) * r2, &bp2, ao);
                    a1 * inner.value
                },
                &bp1,
                ao,
            );
            total = total.add(outer.scale(*c * coef * pairing_factor(2)));
        }
    }
    check_budget(total, opts)
}

/// `∮_{|z| = ε} z^{−N} ψ` for `ψ = g·dz̄`, `z = εe^{iθ}`,
/// `dz̄ = −iεe^{−iθ}dθ`, using the trapezoid rule with `nodes` points.
/// The error field is the rounding floor `∼ 1e−14 · 2π ε^{1−N} max|g|`.
pub fn integrate_boundary(n: i64, g: &TestForm, eps: f64, nodes: usize) -> QuadResult {
    let cg = g.compile::<f64>(Complex::zero());
    let h = 2.0 * std::f64::consts::PI / nodes as f64;
    let mut acc = Complex::zero();
    let mut gmax: f64 = 0.0;
    for j in 0..nodes {
        let th = j as f64 * h;
        let e = Complex::from_polar(1.0, th);
        let z = e * eps;
        let v = cg.eval(&[z]);
        if v == Complex::zero() {
            continue;
        }
        gmax = gmax.max(v.norm());
        acc += z.powi(-n as i32) * v * Complex::new(0.0, -eps) * e.conj();
    }
    QuadResult {
        value: acc * h,
        error: 1e-14 * 2.0 * std::f64::consts::PI * eps.powi(1 - n as i32) * gmax,
        evals: nodes,
    }
}

/// Reference value of `∫ |z|^{2λ} ξ`-type radial integrals for checks:
/// `2π (−2i) ∫_a^b r^{2λ+1} φ̃(r) dr` for a radial density `φ̃`.
pub fn radial_oracle(phi: impl Fn(f64) -> Complex<f64>, lambda: Complex<f64>, a: f64, b: f64, tol: f64) -> QuadResult {
    let bp = breakpoints(a, b, &[]);
    let r = adaptive::<f64>(
        |r| phi(r) * (lambda * (2.0 * r.ln())).exp() * r,
        &bp,
        AdaptiveOpts { rel_tol: tol, abs_tol: 1e-300, max_panels: 8000 },
    );
    r.scale(PAIRING_FACTOR * 2.0 * std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::ring::Ring;

    #[test]
    fn classify_catalog_carriers() {
        let r = Ring::coordinates(&["z"]);
        assert_eq!(Carrier::classify(&Poly::var(&r, 0).pow(3)).unwrap(), Carrier::Power(3));
        let r2 = Ring::coordinates(&["z1", "z2"]);
        let f = &Poly::var(&r2, 0) * &Poly::var(&r2, 1);
        assert_eq!(Carrier::classify(&f).unwrap(), Carrier::Product(vec![1, 1]));
        assert!(Carrier::classify(&(&Poly::var(&r2, 0).pow(2) + &Poly::var(&r2, 1).pow(2))).is_err());
    }

    #[test]
    fn radial_cutoff_matches_oracle() {
        let r = Ring::coordinates(&["z"]);
        let f = Poly::var(&r, 0);
        let form = TestForm::unit(&["z"]);
        let lam = Complex::new(0.3, 0.0);
        let got = integrate_cutoff(&f, &Weight::new(lam, 0), &form, 0.5, &QuadOpts::default()).unwrap();
        let bump = |r: f64| Complex::new((1.0 / (r * r - 1.0)).exp(), 0.0);
        let want = radial_oracle(bump, lam, 0.5, 1.0, 1e-12);
        assert!((got.value - want.value).norm() < 1e-9 * want.value.norm(), "{got:?} {want:?}");
        let odd = integrate_cutoff(&f, &Weight::new(Complex::zero(), 1), &form, 0.5, &QuadOpts::default()).unwrap();
        assert_eq!(odd.value, Complex::zero());
    }

    #[test]
    fn log_split_weights_are_binomial() {
        let s = log_splits(2, 2);
        let total: f64 = s.iter().map(|x| x.0).sum();
        assert_eq!(total, 4.0);
    }
}
