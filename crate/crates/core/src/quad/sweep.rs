//! ε-sweeps of cutoff integrals on geometric grids.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cutoff::{integrate_band, integrate_cutoff, Carrier, QuadOpts, Weight};
use super::gauss::QuadResult;
use crate::error::{Error, Result};
use crate::symbolic::poly::Poly;
use crate::testform::TestForm;

/// `ε_k = eps0 · ratio^k`, `k < count`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsGrid {
    pub eps0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl Default for EpsGrid {
    fn default() -> Self {
        EpsGrid { eps0: 0.5, ratio: 0.75, count: 24 }
    }
}

impl EpsGrid {
    pub fn new(eps0: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(eps0 > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count == 0 {
            return Err(Error::InvalidArgument(format!("bad ε-grid ({eps0}, {ratio}, {count})")));
        }
        Ok(EpsGrid { eps0, ratio, count })
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.eps0 * self.ratio.powi(k as i32)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub f: String,
    pub weight: Weight,
    pub form: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffSweep {
    pub meta: SweepMeta,
    pub eps: Vec<f64>,
    pub values: Vec<num_complex::Complex<f64>>,
    pub errors: Vec<f64>,
}

impl CutoffSweep {
    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("eps,re,im,err\n");
        for ((e, v), r) in self.eps.iter().zip(&self.values).zip(&self.errors) {
            let _ = writeln!(s, "{e:.17e},{:.17e},{:.17e},{r:.3e}", v.re, v.im);
        }
        s
    }
}

/// One cutoff integral per grid point. For `f = z^k` the values are built
/// from the outermost integral plus the bands between neighbouring ε, so
/// consecutive values share all work above the larger cutoff.
pub fn sweep(f: &Poly, w: &Weight, form: &TestForm, grid: &EpsGrid, opts: &QuadOpts, form_id: &str) -> Result<CutoffSweep> {
    let eps = grid.points();
    let carrier = Carrier::classify(f)?;
    let results: Vec<QuadResult> = match carrier {
        Carrier::Power(_) => {
            let parts: Vec<Result<QuadResult>> = (0..eps.len())
                .into_par_iter()
                .map(|i| {
                    if i == 0 {
                        integrate_cutoff(f, w, form, eps[0], opts)
                    } else {
                        integrate_band(f, w, form, eps[i], eps[i - 1], opts)
                    }
                })
                .collect();
            let mut acc = QuadResult::zero();
            let mut out = Vec::with_capacity(eps.len());
            for p in parts {
                acc = acc.add(p?);
                out.push(acc);
            }
            out
        }
        Carrier::Product(_) => eps
            .par_iter()
            .map(|&e| integrate_cutoff(f, w, form, e, opts))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(CutoffSweep {
        meta: SweepMeta { f: f.to_string(), weight: *w, form: form_id.to_string() },
        eps,
        values: results.iter().map(|r| r.value).collect(),
        errors: results.iter().map(|r| r.error.max(f64::MIN_POSITIVE)).collect(),
    })
}
