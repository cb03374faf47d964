//! Principal values as extrapolated limits of cutoff sweeps.

use num_complex::Complex;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::fit::{fit_sweep, tail_slope, SweepFit};
use crate::error::{Error, Result};
use crate::quad::{sweep, Carrier, CutoffSweep, EpsGrid, QuadOpts, Weight};
use crate::symbolic::poly::Poly;
use crate::testform::TestForm;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PvOpts {
    pub grid: EpsGrid,
    pub quad: QuadOpts,
    /// Number of smallest-ε points used by the fit and the slope.
    pub tail: usize,
    /// Number of lattice exponents in the fit.
    pub exponents: usize,
}

impl Default for PvOpts {
    fn default() -> Self {
        PvOpts { grid: EpsGrid::default(), quad: QuadOpts::default(), tail: 12, exponents: 4 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PvResult {
    pub value: Complex<f64>,
    pub fit: SweepFit,
    pub tail_slope: f64,
    pub sweep: CutoffSweep,
}

/// The first `count` values `2(α + x)`, `x ∈ (1/k_j)·ℕ_{>0}`, for the carrier.
pub fn exponent_lattice(carrier: &Carrier, alpha: Complex<f64>, count: usize) -> Vec<Complex<f64>> {
    let mut xs: Vec<Ratio<i64>> = Vec::new();
    for k in carrier.exponents() {
        for i in 1..=(count as i64 * k as i64) {
            xs.push(Ratio::new(i, k as i64));
        }
    }
    xs.sort();
    xs.dedup();
    xs.truncate(count);
    xs.into_iter().map(|x| 2.0 * (alpha + *x.numer() as f64 / *x.denom() as f64)).collect()
}

pub(crate) fn form_label(form: &TestForm) -> String {
    serde_json::to_string(&form.to_json()).unwrap_or_default()
}

/// Limit of `∫_{|f| ≥ ε} |f|^{2α} f^{−N} (log|f|²)^q ξ` as `ε → 0` for
/// `Re α ≥ 0`.
pub fn pv_limit(f: &Poly, alpha: Complex<f64>, n: i64, q: u32, form: &TestForm, opts: &PvOpts) -> Result<PvResult> {
    if alpha.re < 0.0 {
        return Err(Error::InvalidArgument("principal values need Re α ≥ 0; use the finite part".into()));
    }
    let carrier = Carrier::classify(f)?;
    let w = Weight::new(alpha, n).with_log(q);
    let sw = sweep(f, &w, form, &opts.grid, &opts.quad, &form_label(form))?;
    let slope = tail_slope(&sw.eps, &sw.values, opts.tail);
    if !(slope > 0.0) {
        return Err(Error::NonConvergent(format!("sweep tail slope {slope:.3} is not positive")));
    }
    let lattice = exponent_lattice(&carrier, alpha, opts.exponents);
    let max_log = q + carrier.exponents().len() as u32 - 1;
    let fit = if slope.is_infinite() {
        exact_fit(&sw)
    } else {
        fit_sweep(&sw.eps, &sw.values, &lattice, max_log, opts.tail)?
    };
    Ok(PvResult { value: fit.limit, fit, tail_slope: slope, sweep: sw })
}

/// A sweep whose tail is constant needs no extrapolation.
fn exact_fit(sw: &CutoffSweep) -> SweepFit {
    SweepFit {
        limit: *sw.values.last().expect("nonempty sweep"),
        terms: Vec::new(),
        condition: 1.0,
        residual_rms: 0.0,
        limit_change: 0.0,
        points: sw.len(),
    }
}
