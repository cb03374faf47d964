//! Meromorphic extension through the iterated functional equation and
//! Laurent coefficients by Cauchy integrals on a λ-circle.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate_cutoff, QuadOpts, Weight};
use crate::symbolic::rat::rat_to_f64;
use crate::testform::TestForm;
use crate::weyl::BernsteinDatum;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MerextOpts {
    pub quad: QuadOpts,
    /// Overrides the default choice of `M`.
    pub m: Option<u32>,
    /// λ-circle used for `q > 0`.
    pub circle_radius: f64,
    pub circle_nodes: usize,
}

impl Default for MerextOpts {
    fn default() -> Self {
        MerextOpts { quad: QuadOpts::default(), m: None, circle_radius: 0.05, circle_nodes: 32 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MerextResult {
    pub value: Complex<f64>,
    pub m: u32,
    pub error: f64,
}

/// Smallest `M ≥ 0` with `2 Re λ − N + M ≥ 2`.
pub fn default_m(re_lambda: f64, n: i64) -> u32 {
    let need = 2.0 - 2.0 * re_lambda + n as f64;
    need.max(0.0).ceil() as u32
}

/// `P̄_M^*(ξ)` with `λ` left symbolic, together with `M`.
pub struct ContinuedForm<'a> {
    datum: &'a BernsteinDatum,
    form: TestForm,
    m: u32,
    n: i64,
}

impl<'a> ContinuedForm<'a> {
    pub fn new(datum: &'a BernsteinDatum, form: &TestForm, m: u32, n: i64) -> Result<Self> {
        let form = if m == 0 {
            form.clone()
        } else {
            let (pm, _) = datum.iterate(m)?;
            form.apply_adjoint(&pm.conjugate())?
        };
        Ok(ContinuedForm { datum, form, m, n })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `(1/B_M(λ)) ∫ |f|^{2λ} f^{−N} f̄^M P̄_M^*(ξ)`.
    pub fn eval(&self, lambda: Complex<f64>, quad: &QuadOpts) -> Result<(Complex<f64>, f64)> {
        let b = self.datum.b_at(self.m, lambda);
        if b.norm() < 1e-13 {
            return Err(Error::PoleAtLambda(lambda));
        }
        let w = Weight::new(lambda, self.n).with_conj_power(self.m as i64);
        let r = integrate_cutoff(&self.datum.f, &w, &self.form, 0.0, quad)?;
        Ok((r.value / b, r.error / b.norm()))
    }
}

fn pole_distance(datum: &BernsteinDatum, m: u32, lambda: Complex<f64>) -> f64 {
    datum
        .b_m_roots(m.max(1))
        .iter()
        .map(|r| (lambda - rat_to_f64(r)).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Value at `λ₀` of the extension of `λ ↦ ∫ |f|^{2λ} f^{−N} ξ`; for `q > 0`
/// its `q`-th λ-derivative, which pairs `(log|f|²)^q` in the weight.
pub fn merext_eval(
    datum: &BernsteinDatum,
    lambda: Complex<f64>,
    n: i64,
    q: u32,
    form: &TestForm,
    opts: &MerextOpts,
) -> Result<MerextResult> {
    if q == 0 {
        let m = opts.m.unwrap_or_else(|| default_m(lambda.re, n));
        let cf = ContinuedForm::new(datum, form, m, n)?;
        let (value, error) = cf.eval(lambda, &opts.quad)?;
        return Ok(MerextResult { value, m, error });
    }
    let r = opts.circle_radius;
    let m = opts.m.unwrap_or_else(|| default_m(lambda.re - r, n));
    if m > 0 && pole_distance(datum, m, lambda) <= 1.5 * r {
        return Err(Error::PoleAtLambda(lambda));
    }
    let cf = ContinuedForm::new(datum, form, m, n)?;
    let nodes = circle(lambda, r, opts.circle_nodes);
    let vals = eval_nodes(&cf, &nodes, &opts.quad)?;
    let mut acc = Complex::new(0.0, 0.0);
    let mut err = 0.0;
    for ((_, e), (v, ve)) in nodes.iter().zip(&vals) {
        acc += v * e.conj().powu(q);
        err += ve;
    }
    let fact: f64 = (1..=q).map(|i| i as f64).product();
    let scale = fact / (r.powi(q as i32) * nodes.len() as f64);
    Ok(MerextResult { value: acc * scale, m, error: err * scale })
}

/// Nodes `λ₀ + r e^{iθ_j}` with their unit directions.
fn circle(center: Complex<f64>, r: f64, n: usize) -> Vec<(Complex<f64>, Complex<f64>)> {
    (0..n)
        .map(|j| {
            let e = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            (center + e * r, e)
        })
        .collect()
}

fn eval_nodes(
    cf: &ContinuedForm<'_>,
    nodes: &[(Complex<f64>, Complex<f64>)],
    quad: &QuadOpts,
) -> Result<Vec<(Complex<f64>, f64)>> {
    nodes.par_iter().map(|(l, _)| cf.eval(*l, quad)).collect()
}

/// Coefficients `P_k` of `(λ − α)^{−k}` of the continued pairing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LaurentData {
    pub center: Complex<f64>,
    pub radius: f64,
    pub nodes: usize,
    pub m: u32,
    /// Pole orders above this bound must vanish.
    pub pole_cap: u32,
    /// `(k, P_k)` for `k` from `−kmax` to `pole_cap + 2`.
    pub coeffs: Vec<(i32, Complex<f64>)>,
    pub error: f64,
}

impl LaurentData {
    pub fn p(&self, k: i32) -> Option<Complex<f64>> {
        self.coeffs.iter().find(|c| c.0 == k).map(|c| c.1)
    }

    /// Largest `|P_k|` with `k` above the pole-order cap.
    pub fn beyond_cap(&self) -> f64 {
        self.coeffs
            .iter()
            .filter(|c| c.0 > self.pole_cap as i32)
            .map(|c| c.1.norm())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude, for relative checks.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.1.norm()).fold(0.0, f64::max)
    }
}

pub fn laurent_coeffs(
    datum: &BernsteinDatum,
    alpha: Complex<f64>,
    n: i64,
    form: &TestForm,
    radius: f64,
    nodes: usize,
    opts: &MerextOpts,
) -> Result<LaurentData> {
    let m = opts.m.unwrap_or_else(|| default_m(alpha.re - radius, n));
    let d = pole_distance(datum, m, alpha);
    if (d - radius).abs() < 0.2 * radius {
        return Err(Error::PoleOnCircle(radius));
    }
    let cf = ContinuedForm::new(datum, form, m, n)?;
    let pts = circle(alpha, radius, nodes);
    let vals = eval_nodes(&cf, &pts, &opts.quad)?;
    let mut mags: Vec<f64> = vals.iter().map(|v| v.0.norm()).collect();
    mags.sort_by(f64::total_cmp);
    let median = mags[mags.len() / 2];
    if mags.last().copied().unwrap_or(0.0) > 1e8 * median.max(f64::MIN_POSITIVE) {
        return Err(Error::PoleOnCircle(radius));
    }
    let pole_cap = datum.dim() as u32;
    let kmax = 4i32;
    let mut coeffs = Vec::new();
    for k in -kmax..=(pole_cap as i32 + 2) {
        // a_n = (1/N) Σ F_j (r e^{iθ_j})^{−n}, P_k = a_{−k}
        let nidx = -k;
        let mut acc = Complex::new(0.0, 0.0);
        for ((_, e), (v, _)) in pts.iter().zip(&vals) {
            acc += v * e.powi(-nidx);
        }
        coeffs.push((k, acc / nodes as f64 / radius.powi(nidx)));
    }
    let error = vals.iter().map(|v| v.1).sum::<f64>() / nodes as f64;
    Ok(LaurentData { center: alpha, radius, nodes, m, pole_cap, coeffs, error })
}
