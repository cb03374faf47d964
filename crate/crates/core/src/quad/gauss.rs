//! One-dimensional rules: adaptive Gauss–Kronrod (7/15) and Gauss–Legendre.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Integral estimate with an error bound and the number of integrand calls.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex<f64>,
    pub error: f64,
    pub evals: usize,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult { value: Complex::zero(), error: 0.0, evals: 0 }
    }

    pub fn add(self, o: QuadResult) -> QuadResult {
        QuadResult { value: self.value + o.value, error: self.error + o.error, evals: self.evals + o.evals }
    }

    pub fn scale(self, c: Complex<f64>) -> QuadResult {
        QuadResult { value: self.value * c, error: self.error * c.norm(), evals: self.evals }
    }
}

/// One G7/K15 panel: (Kronrod estimate, |K − G|).
pub fn gk15<T: Real>(f: &mut impl FnMut(T) -> Complex<T>, a: T, b: T) -> (Complex<T>, T) {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for i in 0..7 {
        let dx = half * T::lit(XGK[i]);
        let s = f(mid - dx) + f(mid + dx);
        k = k + s * T::lit(WGK[i]);
        if i % 2 == 1 {
            g = g + s * T::lit(WG[i / 2]);
        }
    }
    (k * half, ((k - g) * half).norm())
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex<f64>,
    err: f64,
    seq: usize,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then(o.seq.cmp(&self.seq))
    }
}

/// Options for [`adaptive`].
#[derive(Clone, Copy, Debug)]
pub struct AdaptiveOpts {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for AdaptiveOpts {
    fn default() -> Self {
        AdaptiveOpts { abs_tol: 1e-14, rel_tol: 1e-10, max_panels: 4000 }
    }
}

/// Globally adaptive G7/K15 over consecutive panels `[bp_i, bp_{i+1}]`.
/// Bisection order is deterministic; the result reports whether the budget
/// was exhausted through `error` exceeding the requested tolerance.
pub fn adaptive<T: Real>(mut f: impl FnMut(T) -> Complex<T>, breakpoints: &[f64], opts: AdaptiveOpts) -> QuadResult {
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let mut evals = 0usize;
    let run = |a: f64, b: f64, f: &mut dyn FnMut(T) -> Complex<T>| {
        let mut g = |x: T| f(x);
        let (v, e) = gk15(&mut g, T::lit(a), T::lit(b));
        (Complex::new(v.re.to_f64_lossy(), v.im.to_f64_lossy()), e.to_f64_lossy())
    };
    for w in breakpoints.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, e) = run(w[0], w[1], &mut f);
        evals += 15;
        heap.push(Panel { a: w[0], b: w[1], value: v, err: e, seq });
        seq += 1;
    }
    loop {
        let total: Complex<f64> = sum_panels(&heap);
        let err: f64 = heap.iter().map(|p| p.err).sum();
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= target || heap.len() >= opts.max_panels {
            return QuadResult { value: total, error: err, evals };
        }
        let Some(worst) = heap.pop() else {
            return QuadResult::zero();
        };
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // panel cannot be split further in double precision
            heap.push(Panel { err: 0.0, ..worst });
            continue;
        }
        for (a, b) in [(worst.a, m), (m, worst.b)] {
            let (v, e) = run(a, b, &mut f);
            evals += 15;
            heap.push(Panel { a, b, value: v, err: e, seq });
            seq += 1;
        }
    }
}

/// Sums panels in left-to-right order so the total does not depend on the
/// bisection history.
fn sum_panels(heap: &BinaryHeap<Panel>) -> Complex<f64> {
    let mut ps: Vec<(f64, Complex<f64>)> = heap.iter().map(|p| (p.a, p.value)).collect();
    ps.sort_by(|x, y| x.0.total_cmp(&y.0));
    ps.into_iter().fold(Complex::zero(), |acc, (_, v)| acc + v)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}
