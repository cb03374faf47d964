//! Finite parts of cutoff integrals for `Re α < 0` with explicit counterterms.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::expansion::taylor_coeff;
use super::fit::{fit_sweep, tail_slope, SweepFit};
use super::pv::{form_label, PvOpts};
use crate::error::{Error, Result};
use crate::quad::{pairing_factor, sweep, Carrier, CutoffSweep, Weight};
use crate::symbolic::poly::Poly;
use crate::testform::TestForm;

/// `κ = (−2i)·2π`: the factor relating a radial moment to the pairing.
pub fn counterterm_constant() -> Complex<f64> {
    pairing_factor(1) * (2.0 * std::f64::consts::PI)
}

/// `G_{e,j}(ε)`, an antiderivative of `s^{e−1} (ln s)^j` at `s = ε`.
pub fn g_antiderivative(e: f64, j: u32, eps: f64) -> f64 {
    let l = eps.ln();
    if e == 0.0 {
        return l.powi(j as i32 + 1) / (j + 1) as f64;
    }
    let mut acc = 0.0;
    let mut fall = 1.0;
    for i in 0..=j {
        if i > 0 {
            fall *= (j - i + 1) as f64;
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * fall * l.powi((j - i) as i32) * eps.powf(e) / e.powi(i as i32 + 1);
    }
    acc
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Counterterm {
    /// `e = 2(α + r + m′)`.
    pub exponent: f64,
    pub r: (i64, i64),
    pub m: u32,
    pub m_prime: u32,
    /// Log power of the weight; the ε-dependence is `G_{e,j}(ε)`.
    pub j: u32,
    /// Taylor coefficient `a_{p,q}` of the density feeding this term.
    pub taylor: Complex<f64>,
    /// Counterterm = `factor · taylor · G_{e,j}(ε)`.
    pub factor: Complex<f64>,
    pub log_case: bool,
}

impl Counterterm {
    pub fn at(&self, eps: f64) -> Complex<f64> {
        self.factor * self.taylor * g_antiderivative(self.exponent, self.j, eps)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinitePartResult {
    pub value: Complex<f64>,
    pub counterterms: Vec<Counterterm>,
    /// Tail slope of the uncorrected sweep (its divergence exponent when negative).
    pub divergence_exponent: f64,
    pub corrected_slope: f64,
    pub fit: SweepFit,
    pub uncorrected: CutoffSweep,
    pub corrected: Vec<Complex<f64>>,
}

/// Counterterms for `f = z^k`: the term `z^{q'+kN} z̄^{q'}` of the density
/// contributes `ε^e` with `e = 2(α + (q'+1)/k)`; it is triggered when
/// `e ≤ 0`.
pub fn counterterms(k: u32, alpha: f64, n: i64, q: u32, form: &TestForm) -> Result<Vec<Counterterm>> {
    let mut out = Vec::new();
    let kappa = counterterm_constant();
    let mut qp = 0u32;
    loop {
        let x = (qp + 1) as f64 / k as f64;
        let e = 2.0 * (alpha + x);
        if e > 1e-12 {
            break;
        }
        let log_case = e.abs() <= 1e-12;
        let p = qp as i64 + k as i64 * n;
        if p >= 0 {
            let taylor = taylor_coeff(form, p as u32, qp)?;
            let total = qp + 1;
            let mp = total / k;
            out.push(Counterterm {
                exponent: if log_case { 0.0 } else { e },
                r: ((total % k) as i64, k as i64),
                m: (mp as i64 + n) as u32,
                m_prime: mp,
                j: q,
                taylor,
                factor: kappa * (2f64.powi(q as i32) / k as f64),
                log_case,
            });
        }
        qp += 1;
    }
    Ok(out)
}

/// Limit of the cutoff integral plus the triggered counterterms, for
/// `f = z^k` and real `α < 0`.
pub fn finite_part(f: &Poly, alpha: f64, n: i64, q: u32, form: &TestForm, opts: &PvOpts) -> Result<FinitePartResult> {
    let k = match Carrier::classify(f)? {
        Carrier::Power(k) => k,
        Carrier::Product(_) => {
            return Err(Error::InvalidArgument("finite parts are implemented for f = z^k".into()))
        }
    };
    if n < 0 {
        return Err(Error::InvalidArgument("N must be non-negative".into()));
    }
    let cts = counterterms(k, alpha, n, q, form)?;
    let w = Weight::new(Complex::new(alpha, 0.0), n).with_log(q);
    let sw = sweep(f, &w, form, &opts.grid, &opts.quad, &form_label(form))?;
    let corrected: Vec<Complex<f64>> = sw
        .eps
        .iter()
        .zip(&sw.values)
        .map(|(&e, v)| v + cts.iter().map(|c| c.at(e)).sum::<Complex<f64>>())
        .collect();
    let divergence_exponent = tail_slope(&sw.eps, &sw.values, opts.tail);
    let corrected_slope = tail_slope(&sw.eps, &corrected, opts.tail);
    if !(corrected_slope > 0.0) {
        return Err(Error::NonConvergent(format!(
            "corrected sweep tail slope {corrected_slope:.3} (uncorrected {divergence_exponent:.3})"
        )));
    }
    let mut exps = Vec::new();
    let mut i = 1;
    while exps.len() < opts.exponents {
        let e = 2.0 * (alpha + i as f64 / k as f64);
        if e > 1e-12 {
            exps.push(Complex::new(e, 0.0));
        }
        i += 1;
    }
    let fit = if corrected_slope.is_infinite() {
        SweepFit {
            limit: *corrected.last().expect("nonempty"),
            terms: Vec::new(),
            condition: 1.0,
            residual_rms: 0.0,
            limit_change: 0.0,
            points: corrected.len(),
        }
    } else {
        fit_sweep(&sw.eps, &corrected, &exps, q, opts.tail)?
    };
    Ok(FinitePartResult {
        value: fit.limit,
        counterterms: cts,
        divergence_exponent,
        corrected_slope,
        fit,
        uncorrected: sw,
        corrected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_is_an_antiderivative() {
        for &(e, j) in &[(-0.6, 0u32), (-0.6, 2), (0.0, 1), (1.4, 1)] {
            let s = 0.3;
            let h = 1e-6;
            let d = (g_antiderivative(e, j, s + h) - g_antiderivative(e, j, s - h)) / (2.0 * h);
            let want = s.powf(e - 1.0) * s.ln().powi(j as i32);
            assert!((d - want).abs() < 1e-6 * want.abs().max(1.0), "{e} {j}: {d} {want}");
        }
    }
}
