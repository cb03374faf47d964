//! Polar-coordinate engine for one complex coordinate.
//!
//! For `f = z^k` the level sets `{|f| = ε}` are circles about the origin, so
//! the cutoff region is an exact radial interval. The angular integral uses
//! the trapezoid rule with node doubling (spectrally accurate for smooth
//! periodic data, and for the bump on an arc since it is flat at the ends);
//! the radial integral is adaptive Gauss–Kronrod with geometric breakpoints.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::gauss::{adaptive, AdaptiveOpts, QuadResult};
use crate::scalar::{cplx, Real};
use crate::testform::CompiledForm;

const MIN_NODES_LOG2: usize = 6;
const MAX_NODES_LOG2: usize = 13;

/// Unit roots `e^{2πij/n}` for `n = 2^p`, built from the first octant by
/// exact symmetries so that rotations by multiples of `π/2` act exactly.
fn table(log2n: usize) -> &'static [Complex<f64>] {
    static TABLES: OnceLock<Vec<Vec<Complex<f64>>>> = OnceLock::new();
    let all = TABLES.get_or_init(|| (0..=MAX_NODES_LOG2).map(build_table).collect());
    &all[log2n]
}

fn build_table(log2n: usize) -> Vec<Complex<f64>> {
    let n = 1usize << log2n;
    if n < 8 {
        return (0..n).map(|j| Complex::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect();
    }
    let mut t = vec![Complex::zero(); n];
    let (q, h, e) = (n / 4, n / 2, n / 8);
    for j in 0..=e {
        let th = 2.0 * PI * j as f64 / n as f64;
        t[j] = Complex::new(th.cos(), th.sin());
    }
    for j in e + 1..=q {
        let s = t[q - j];
        t[j] = Complex::new(s.im, s.re);
    }
    for j in q + 1..h {
        let s = t[j - q];
        t[j] = Complex::new(-s.im, s.re);
    }
    for j in h..n {
        t[j] = -t[j - h];
    }
    t
}

/// Halving butterfly sum `v[j] += v[j + h]` for `h = n/2, n/4, …, 1`.
/// Exactly cancels node values related by the table symmetries.
fn butterfly_sum<T: Real>(mut v: Vec<Complex<T>>) -> Complex<T> {
    let mut h = v.len() / 2;
    while h >= 1 {
        for j in 0..h {
            v[j] = v[j] + v[j + h];
        }
        h /= 2;
    }
    v.first().copied().unwrap_or_else(Complex::zero)
}

/// Radial weight `r^power · (log_scale · ln r)^q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialWeight {
    pub power: Complex<f64>,
    pub log_scale: f64,
    pub q: u32,
}

impl RadialWeight {
    pub fn eval<T: Real>(&self, r: T) -> Complex<T> {
        let lr = r.ln();
        let p: Complex<T> = cplx(self.power);
        let mut w = (p * lr).exp();
        if self.q > 0 {
            w = w * (T::lit(self.log_scale) * lr).powi(self.q as i32);
        }
        w
    }
}

/// `∫_0^{2π} e^{−i·freq·θ} φ(r e^{iθ}) dθ` for a one-coordinate form.
pub fn angular<T: Real>(form: &CompiledForm<T>, r: T, freq: i64, tol: f64) -> Complex<T> {
    let c = form.center(0);
    let a = c.norm();
    let rho = form.radius(0);
    let inv_rho2 = T::one() / (rho * rho);
    if r >= a + rho || (a > rho && r <= a - rho) {
        return Complex::zero();
    }
    if a.to_f64_lossy() <= 1e-15 || r <= rho - a {
        full_circle(form, r, freq, tol, c, inv_rho2)
    } else {
        let kappa = (r * r + a * a - rho * rho) / (T::lit(2.0) * r * a);
        if kappa <= -T::one() {
            return full_circle(form, r, freq, tol, c, inv_rho2);
        }
        let beta = kappa.min(T::one()).acos();
        let thc = c.im.atan2(c.re);
        arc(form, r, freq, tol, c, inv_rho2, thc - beta, thc + beta)
    }
}

fn full_circle<T: Real>(
    form: &CompiledForm<T>,
    r: T,
    freq: i64,
    tol: f64,
    c: Complex<T>,
    inv_rho2: T,
) -> Complex<T> {
    let r2a2 = r * r + c.norm_sqr();
    let two_r = T::lit(2.0) * r;
    let node = |p: usize, j: usize| -> Complex<T> {
        let tab = table(p);
        let n = tab.len() as i64;
        let rot = |m: i64| -> Complex<T> { cplx(tab[((m * j as i64).rem_euclid(n)) as usize]) };
        let e = rot(1);
        let t = (r2a2 - two_r * (c.re * e.re + c.im * e.im)) * inv_rho2;
        form.eval_polar(r, t, rot) * rot(-freq)
    };
    let mut p = MIN_NODES_LOG2;
    let mut vals: Vec<Complex<T>> = (0..1usize << p).map(|j| node(p, j)).collect();
    let mut prev = butterfly_sum(vals.clone()) * T::lit(2.0 * PI / vals.len() as f64);
    while p < MAX_NODES_LOG2 {
        p += 1;
        let n = 1usize << p;
        let mut next = Vec::with_capacity(n);
        for j in 0..n / 2 {
            next.push(vals[j]);
            next.push(node(p, 2 * j + 1));
        }
        vals = next;
        let l1: f64 = vals.iter().map(|v| v.norm().to_f64_lossy()).sum::<f64>() * 2.0 * PI / n as f64;
        let cur = butterfly_sum(vals.clone()) * T::lit(2.0 * PI / n as f64);
        let diff = (cur - prev).norm().to_f64_lossy();
        prev = cur;
        if diff <= tol * l1 || l1 == 0.0 {
            break;
        }
    }
    prev
}

#[allow(clippy::too_many_arguments)]
fn arc<T: Real>(
    form: &CompiledForm<T>,
    r: T,
    freq: i64,
    tol: f64,
    c: Complex<T>,
    inv_rho2: T,
    th0: T,
    th1: T,
) -> Complex<T> {
    let r2a2 = r * r + c.norm_sqr();
    let two_r = T::lit(2.0) * r;
    let span = th1 - th0;
    let node = |th: T| -> Complex<T> {
        let rot = |m: i64| -> Complex<T> {
            let a = th * T::lit(m as f64);
            Complex::new(a.cos(), a.sin())
        };
        let e = rot(1);
        let t = (r2a2 - two_r * (c.re * e.re + c.im * e.im)) * inv_rho2;
        form.eval_polar(r, t, rot) * rot(-freq)
    };
    // trapezoid on the closed arc; the density vanishes to all orders at both ends
    let mut n = 1usize << MIN_NODES_LOG2;
    let mut vals: Vec<Complex<T>> = (1..n).map(|j| node(th0 + span * T::lit(j as f64 / n as f64))).collect();
    let sum = |v: &[Complex<T>]| v.iter().fold(Complex::zero(), |a, b| a + *b);
    let mut prev = sum(&vals) * span / T::lit(n as f64);
    while n < (1 << MAX_NODES_LOG2) {
        n *= 2;
        let mut next = Vec::with_capacity(n);
        for j in 1..n {
            if j % 2 == 0 {
                next.push(vals[j / 2 - 1]);
            } else {
                next.push(node(th0 + span * T::lit(j as f64 / n as f64)));
            }
        }
        vals = next;
        let l1: f64 = vals.iter().map(|v| v.norm().to_f64_lossy()).sum::<f64>() * span.to_f64_lossy() / n as f64;
        let cur = sum(&vals) * span / T::lit(n as f64);
        let diff = (cur - prev).norm().to_f64_lossy();
        prev = cur;
        if diff <= tol * l1 || l1 == 0.0 {
            break;
        }
    }
    prev
}

/// Radial support `[r_min, r_max]` of a one-coordinate form.
pub fn radial_support<T: Real>(form: &CompiledForm<T>) -> (f64, f64) {
    let a = form.center(0).norm().to_f64_lossy();
    let rho = form.radius(0).to_f64_lossy();
    ((a - rho).max(0.0), a + rho)
}

/// Breakpoints for `[lo, hi]`: geometric towards `lo` (or towards 0 when
/// `lo = 0`) plus the radii where the angular support changes.
pub fn breakpoints(lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut bp = vec![lo, hi];
    if lo > 0.0 {
        let mut x = lo * 2.0;
        while x < hi {
            bp.push(x);
            x *= 2.0;
        }
    } else {
        let mut x = hi / 2.0;
        for _ in 0..48 {
            bp.push(x);
            x /= 2.0;
        }
    }
    bp.extend(extra.iter().copied().filter(|&x| x > lo && x < hi));
    bp.sort_by(|a, b| a.total_cmp(b));
    bp.dedup();
    bp
}

/// `∫_{r_a}^{r_b} ∫_0^{2π} w(r) e^{−i·freq·θ} φ(r e^{iθ}) r dθ dr` (Lebesgue
/// measure; callers apply the pairing factor).
pub fn polar_band<T: Real>(
    form: &CompiledForm<T>,
    weight: &RadialWeight,
    freq: i64,
    r_a: f64,
    r_b: f64,
    opts: AdaptiveOpts,
) -> QuadResult {
    let (smin, smax) = radial_support(form);
    let lo = r_a.max(smin);
    let hi = r_b.min(smax);
    if hi <= lo || form.is_zero() {
        return QuadResult::zero();
    }
    let a = form.center(0).norm().to_f64_lossy();
    let rho = form.radius(0).to_f64_lossy();
    let bp = breakpoints(lo, hi, &[rho - a, a]);
    let ang_tol = (opts.rel_tol * 1e-2).max(1e-14);
    adaptive::<T>(
        |r| {
            if r <= T::zero() {
                return Complex::zero();
            }
            weight.eval(r) * angular(form, r, freq, ang_tol) * r
        },
        &bp,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testform::TestForm;

    #[test]
    fn tables_are_symmetric_unit_roots() {
        for p in 3..=MAX_NODES_LOG2 {
            let t = table(p);
            let n = t.len();
            for (j, z) in t.iter().enumerate() {
                let e = Complex::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
                assert!((z - e).norm() < 1e-15);
                assert_eq!(t[(j + n / 2) % n], -*z);
            }
        }
    }

    #[test]
    fn radial_data_against_odd_frequencies_is_exactly_zero() {
        let f = TestForm::unit(&["z"]).compile::<f64>(Complex::zero());
        for k in 1..6 {
            assert_eq!(angular(&f, 0.37, k, 1e-14), Complex::zero());
        }
    }

    #[test]
    fn offset_disc_area() {
        // ∫ B over an off-centre disc equals the centred value
        let base = TestForm::unit(&["z"]);
        let shifted = TestForm::make_bump(
            vec![crate::symbolic::rat::GaussRat::parse("3/10+2/5i").unwrap()],
            vec![num_traits::One::one()],
            base.poly().clone(),
        )
        .unwrap();
        let w = RadialWeight { power: Complex::zero(), log_scale: 1.0, q: 0 };
        let o = AdaptiveOpts { rel_tol: 1e-11, ..Default::default() };
        let a = polar_band(&base.compile::<f64>(Complex::zero()), &w, 0, 0.0, 2.0, o).value;
        let b = polar_band(&shifted.compile::<f64>(Complex::zero()), &w, 0, 0.0, 2.0, o).value;
        assert!((a - b).norm() < 1e-9 * a.norm(), "{a} {b}");
    }
}
