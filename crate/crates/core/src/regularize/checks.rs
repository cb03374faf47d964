//! Comparison harnesses: principal value against the continued pairing,
//! the formal action of vector fields, and boundary-integral decay.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::fit::log_log_slope;
use super::merext::{merext_eval, MerextOpts};
use super::pv::{pv_limit, PvOpts};
use crate::error::{Error, Result};
use crate::quad::integrate_boundary;
use crate::testform::TestForm;
use crate::weyl::{BernsteinDatum, DiffOperator};

pub const REL_FLOOR: f64 = 1e-12;

pub fn relative(a: Complex<f64>, b: Complex<f64>) -> f64 {
    (a - b).norm() / b.norm().max(REL_FLOOR)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub f: String,
    pub alpha: Complex<f64>,
    pub n: i64,
    pub q: u32,
    pub t_value: Complex<f64>,
    pub s_value: Complex<f64>,
    pub abs_discrepancy: f64,
    pub rel_discrepancy: f64,
    pub tail_slope: f64,
    pub fit_condition: f64,
    pub counterterms: usize,
    pub m: u32,
}

/// `T` by extrapolated cutoff sweep, `S` by the continued pairing at `λ = α`.
pub fn compare_t_s(
    datum: &BernsteinDatum,
    alpha: Complex<f64>,
    n: i64,
    q: u32,
    form: &TestForm,
    pv: &PvOpts,
    me: &MerextOpts,
) -> Result<ComparisonReport> {
    let t = pv_limit(&datum.f, alpha, n, q, form, pv)?;
    let s = merext_eval(datum, alpha, n, q, form, me)?;
    Ok(ComparisonReport {
        f: datum.name.clone(),
        alpha,
        n,
        q,
        t_value: t.value,
        s_value: s.value,
        abs_discrepancy: (t.value - s.value).norm(),
        rel_discrepancy: relative(t.value, s.value),
        tail_slope: t.tail_slope,
        fit_condition: t.fit.condition,
        counterterms: 0,
        m: s.m,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormalActionReport {
    pub vector_field: String,
    pub alpha: Complex<f64>,
    pub n: i64,
    /// `⟨T_{α,N}, V^*ξ⟩`.
    pub lhs: Complex<f64>,
    /// `(α − N)⟨V(f)|f|^{2α} f^{−N−1}, ξ⟩`.
    pub rhs: Complex<f64>,
    pub abs_discrepancy: f64,
    pub rel_discrepancy: f64,
}

/// Both pairings of the formal action `V(T_{α,N}) = (α−N) V(f) T_{α,N+1}`.
pub fn formal_action_check(
    datum: &BernsteinDatum,
    alpha: Complex<f64>,
    n: i64,
    v: &DiffOperator,
    form: &TestForm,
    pv: &PvOpts,
) -> Result<FormalActionReport> {
    if v.order() > 1 {
        return Err(Error::InvalidArgument("V must be a vector field".into()));
    }
    let adj = form.apply_adjoint(v)?;
    let vf = v.apply_poly(&datum.f)?;
    let weighted = form.mul_poly(&vf)?;
    let lhs = if adj.is_zero() { Complex::new(0.0, 0.0) } else { pv_limit(&datum.f, alpha, n, 0, &adj, pv)?.value };
    let rhs = if weighted.is_zero() {
        Complex::new(0.0, 0.0)
    } else {
        (alpha - n as f64) * pv_limit(&datum.f, alpha, n + 1, 0, &weighted, pv)?.value
    };
    Ok(FormalActionReport {
        vector_field: v.to_string(),
        alpha,
        n,
        lhs,
        rhs,
        abs_discrepancy: (lhs - rhs).norm(),
        rel_discrepancy: relative(lhs, rhs),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryDecay {
    pub n: i64,
    pub eps: Vec<f64>,
    pub values: Vec<Complex<f64>>,
    /// Rounding floor of each value.
    pub floors: Vec<f64>,
    /// Log–log slope of `|value|` over the points above their floor; NaN
    /// when fewer than three points remain.
    pub slope: f64,
    pub points_used: usize,
    pub identically_zero: bool,
}

impl BoundaryDecay {
    /// True when the values never rise above the rounding floor.
    pub fn noise_limited(&self) -> bool {
        self.points_used < 3
    }
}

/// `∮_{|z|=ε} z^{−N} ψ` over the grid and the fitted decay exponent.
pub fn boundary_decay_check(n: i64, psi: &TestForm, eps: &[f64], nodes: usize) -> Result<BoundaryDecay> {
    if psi.dim() != 1 {
        return Err(Error::InvalidArgument("boundary integrals are one-dimensional".into()));
    }
    let res: Vec<_> = eps.iter().map(|&e| integrate_boundary(n, psi, e, nodes)).collect();
    let values: Vec<Complex<f64>> = res.iter().map(|r| r.value).collect();
    let floors: Vec<f64> = res.iter().map(|r| r.error).collect();
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .zip(&res)
        .filter(|(_, r)| r.value.norm() > 100.0 * r.error && r.value.norm() > 0.0)
        .map(|(e, r)| (e.ln(), r.value.norm().ln()))
        .collect();
    let identically_zero = values.iter().all(|v| *v == Complex::new(0.0, 0.0));
    let slope = if pts.len() >= 3 { log_log_slope(&pts) } else { f64::NAN };
    Ok(BoundaryDecay { n, eps: eps.to_vec(), values, floors, slope, points_used: pts.len(), identically_zero })
}
