//! Cross-check engine: adaptive subdivision of real-coordinate boxes in one
//! complex variable with a tensor Gauss–Legendre rule per cell. Cells that
//! cross a region boundary are refined down to `min_cell`.

use num_complex::Complex;
use num_traits::Zero;

use super::cutoff::{Weight, PAIRING_FACTOR};
use super::gauss::{gauss_legendre, QuadResult};
use crate::error::{Error, Result};
use crate::symbolic::poly::Poly;
use crate::testform::TestForm;

#[derive(Clone, Copy, Debug)]
pub struct BoxOpts {
    pub tol: f64,
    pub order: usize,
    pub min_cell: f64,
    pub max_depth: u32,
}

impl Default for BoxOpts {
    fn default() -> Self {
        BoxOpts { tol: 1e-8, order: 8, min_cell: 1e-4, max_depth: 24 }
    }
}

/// A region in the plane described by an indicator; `crosses` reports
/// whether a cell may straddle the boundary.
pub trait PlaneRegion {
    fn contains(&self, z: Complex<f64>) -> bool;
    fn crosses(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> bool;
}

/// `{r_lo ≤ |z − c| ≤ r_hi}`.
#[derive(Clone, Copy, Debug)]
pub struct Annulus {
    pub center: Complex<f64>,
    pub r_lo: f64,
    pub r_hi: f64,
}

impl Annulus {
    fn dist_range(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> (f64, f64) {
        let (cx, cy) = (self.center.re, self.center.im);
        let nx = cx.clamp(x0, x1);
        let ny = cy.clamp(y0, y1);
        let dmin = ((nx - cx).powi(2) + (ny - cy).powi(2)).sqrt();
        let fx = if (cx - x0).abs() > (cx - x1).abs() { x0 } else { x1 };
        let fy = if (cy - y0).abs() > (cy - y1).abs() { y0 } else { y1 };
        let dmax = ((fx - cx).powi(2) + (fy - cy).powi(2)).sqrt();
        (dmin, dmax)
    }
}

impl PlaneRegion for Annulus {
    fn contains(&self, z: Complex<f64>) -> bool {
        let d = (z - self.center).norm();
        d >= self.r_lo && d <= self.r_hi
    }

    fn crosses(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> bool {
        let (a, b) = self.dist_range(x0, x1, y0, y1);
        (a < self.r_lo && b > self.r_lo) || (a < self.r_hi && b > self.r_hi)
    }
}

struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

fn cell(rule: &Rule, g: &dyn Fn(Complex<f64>) -> Complex<f64>, x0: f64, x1: f64, y0: f64, y1: f64) -> Complex<f64> {
    let (hx, mx) = (0.5 * (x1 - x0), 0.5 * (x0 + x1));
    let (hy, my) = (0.5 * (y1 - y0), 0.5 * (y0 + y1));
    let mut acc = Complex::zero();
    for (xi, wi) in rule.x.iter().zip(&rule.w) {
        for (yj, wj) in rule.x.iter().zip(&rule.w) {
            acc += g(Complex::new(mx + hx * xi, my + hy * yj)) * (wi * wj);
        }
    }
    acc * (hx * hy)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    rule: &Rule,
    g: &dyn Fn(Complex<f64>) -> Complex<f64>,
    region: &dyn PlaneRegion,
    b: [f64; 4],
    whole: Complex<f64>,
    tol: f64,
    depth: u32,
    opts: &BoxOpts,
    out: &mut QuadResult,
) {
    let [x0, x1, y0, y1] = b;
    let (mx, my) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let kids = [[x0, mx, y0, my], [mx, x1, y0, my], [x0, mx, my, y1], [mx, x1, my, y1]];
    let vals: Vec<Complex<f64>> = kids.iter().map(|k| cell(rule, g, k[0], k[1], k[2], k[3])).collect();
    out.evals += 4 * rule.x.len() * rule.x.len();
    let sum: Complex<f64> = vals.iter().sum();
    let err = (sum - whole).norm();
    let small = (x1 - x0) <= opts.min_cell;
    let crossing = region.crosses(x0, x1, y0, y1);
    if depth >= opts.max_depth || (err <= tol && !crossing) || small {
        out.value += sum;
        out.error += err;
        return;
    }
    for (k, v) in kids.iter().zip(vals) {
        refine(rule, g, region, *k, v, tol / 4.0, depth + 1, opts, out);
    }
}

/// `∫_{box ∩ region} g` (Lebesgue measure) by boundary-aware subdivision.
pub fn box_integrate(
    g: &dyn Fn(Complex<f64>) -> Complex<f64>,
    region: &dyn PlaneRegion,
    bbox: [f64; 4],
    opts: &BoxOpts,
) -> QuadResult {
    let (x, w) = gauss_legendre(opts.order);
    let rule = Rule { x, w };
    let masked = |z: Complex<f64>| if region.contains(z) { g(z) } else { Complex::zero() };
    let whole = cell(&rule, &masked, bbox[0], bbox[1], bbox[2], bbox[3]);
    let mut out = QuadResult { evals: rule.x.len().pow(2), ..QuadResult::zero() };
    refine(&rule, &masked, region, bbox, whole, opts.tol, 0, opts, &mut out);
    out
}

/// Cutoff integral of a one-coordinate form against `f = z^k` with the
/// weight evaluated through the symbolic expression layer.
pub fn box_cutoff(f: &Poly, w: &Weight, form: &TestForm, eps: f64, opts: &BoxOpts) -> Result<QuadResult> {
    if form.dim() != 1 {
        return Err(Error::InvalidArgument("the box engine handles one coordinate".into()));
    }
    let k = f.total_degree() as f64;
    let expr = w.to_expr(f);
    let cf = form.compile::<f64>(w.lambda);
    let c = cf.center(0);
    let rho = cf.radius(0);
    let region = Annulus { center: Complex::zero(), r_lo: eps.powf(1.0 / k), r_hi: f64::INFINITY };
    let n = f.ring().len();
    let g = |z: Complex<f64>| {
        let phi = cf.eval(&[z]);
        if phi == Complex::zero() {
            return phi;
        }
        let mut vals = vec![Complex::zero(); n];
        vals[0] = z;
        vals[1] = z.conj();
        expr.eval(&vals, w.lambda, 1e-300).unwrap_or_else(|_| Complex::zero()) * phi
    };
    let bbox = [c.re - rho, c.re + rho, c.im - rho, c.im + rho];
    Ok(box_integrate(&g, &region, bbox, opts).scale(PAIRING_FACTOR))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_area() {
        let region = Annulus { center: Complex::zero(), r_lo: 0.5, r_hi: 1.0 };
        let opts = BoxOpts { min_cell: 1e-3, order: 4, ..Default::default() };
        let r = box_integrate(&|_| Complex::new(1.0, 0.0), &region, [-1.0, 1.0, -1.0, 1.0], &opts);
        let exact = std::f64::consts::PI * 0.75;
        assert!((r.value.re - exact).abs() < 1e-4, "{r:?}");
        assert!((r.value * PAIRING_FACTOR - Complex::new(0.0, -2.0 * exact)).norm() < 2e-4);
    }
}
