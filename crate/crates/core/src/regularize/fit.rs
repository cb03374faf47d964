//! Least-squares extrapolation of ε-sweeps on a known exponent lattice.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitTerm {
    pub exponent: Complex<f64>,
    pub log_power: u32,
    pub coeff: Complex<f64>,
}

/// `I(ε) ≈ L + Σ c · ε^e (ln ε)^j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepFit {
    pub limit: Complex<f64>,
    pub terms: Vec<FitTerm>,
    /// Ratio of extreme singular values of the column-scaled design matrix.
    pub condition: f64,
    pub residual_rms: f64,
    /// Change of the limit when the last lattice exponent is dropped.
    pub limit_change: f64,
    pub points: usize,
}

const MAX_CONDITION: f64 = 1e15;

fn solve(eps: &[f64], vals: &[Complex<f64>], exponents: &[Complex<f64>], max_log: u32) -> Result<(DVector<Complex<f64>>, f64, f64)> {
    let cols = 1 + exponents.len() * (max_log as usize + 1);
    let rows = eps.len();
    if rows < cols {
        return Err(Error::InvalidArgument(format!("{rows} sweep points cannot fit {cols} terms")));
    }
    let mut a = DMatrix::<Complex<f64>>::zeros(rows, cols);
    for (i, &e) in eps.iter().enumerate() {
        let le = e.ln();
        a[(i, 0)] = Complex::new(1.0, 0.0);
        let mut c = 1;
        for ex in exponents {
            let base = (ex * le).exp();
            for j in 0..=max_log {
                a[(i, c)] = base * le.powi(j as i32);
                c += 1;
            }
        }
    }
    let mut scale = vec![1.0; cols];
    for (j, s) in scale.iter_mut().enumerate() {
        let m = a.column(j).iter().map(|v| v.norm()).fold(0.0, f64::max);
        if m > 0.0 {
            *s = m;
            a.column_mut(j).iter_mut().for_each(|v| *v /= m);
        }
    }
    let b = DVector::from_iterator(rows, vals.iter().copied());
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    let x = svd.solve(&b, 0.0).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let r = &a * &x - &b;
    let rms = (r.iter().map(|v| v.norm_sqr()).sum::<f64>() / rows as f64).sqrt();
    let x = DVector::from_iterator(cols, x.iter().zip(&scale).map(|(v, s)| v / *s));
    Ok((x, cond, rms))
}

/// Fits the smallest `tail` values of the sweep (the last entries of a
/// decreasing grid) against `1` and `ε^e (ln ε)^j`, `j ≤ max_log`.
pub fn fit_sweep(
    eps: &[f64],
    vals: &[Complex<f64>],
    exponents: &[Complex<f64>],
    max_log: u32,
    tail: usize,
) -> Result<SweepFit> {
    let n = eps.len().min(vals.len());
    let start = n.saturating_sub(tail);
    let (e, v) = (&eps[start..n], &vals[start..n]);
    let (x, condition, residual_rms) = solve(e, v, exponents, max_log)?;
    let limit_change = if exponents.len() > 1 {
        solve(e, v, &exponents[..exponents.len() - 1], max_log)
            .map(|(y, _, _)| (y[0] - x[0]).norm())
            .unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    let mut terms = Vec::new();
    let mut c = 1;
    for ex in exponents {
        for j in 0..=max_log {
            terms.push(FitTerm { exponent: *ex, log_power: j, coeff: x[c] });
            c += 1;
        }
    }
    Ok(SweepFit { limit: x[0], terms, condition, residual_rms, limit_change, points: e.len() })
}

/// Log–log regression slope of `|I(ε_k) − I(ε_{k−1})|` against `ε_k` over the
/// last `tail` points. Exact zeros are skipped; `+∞` if every difference is
/// exactly zero.
pub fn tail_slope(eps: &[f64], vals: &[Complex<f64>], tail: usize) -> f64 {
    let n = eps.len().min(vals.len());
    let start = n.saturating_sub(tail).max(1);
    let pts: Vec<(f64, f64)> = (start..n)
        .filter_map(|k| {
            let d = (vals[k] - vals[k - 1]).norm();
            (d > 0.0).then(|| (eps[k].ln(), d.ln()))
        })
        .collect();
    log_log_slope(&pts)
}

/// Least-squares slope through `(ln x, ln y)` points; `+∞` for no points.
pub fn log_log_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::INFINITY;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_synthetic_limit() {
        let eps: Vec<f64> = (0..24).map(|k| 0.5 * 0.75f64.powi(k)).collect();
        let a: Complex<f64> = Complex::new(0.3, 0.1);
        let e1: Complex<f64> = 2.0 * (a + 1.0);
        let e2: Complex<f64> = 2.0 * (a + 2.0);
        let vals: Vec<Complex<f64>> = eps
            .iter()
            .map(|&e| Complex::<f64>::new(1.5, -0.5) + 0.7 * (e1 * e.ln()).exp() - 0.2 * (e2 * e.ln()).exp() * e.ln())
            .collect();
        let fit = fit_sweep(&eps, &vals, &[e1, e2], 1, 12).unwrap();
        assert!((fit.limit - Complex::new(1.5, -0.5)).norm() < 1e-10, "{fit:?}");
        let s = tail_slope(&eps, &vals, 12);
        assert!((s - e1.re).abs() < 0.05, "{s}");
    }
}
