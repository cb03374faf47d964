use num_complex::Complex;
use proptest::prelude::*;

use pvlab::quad::boxes::{box_cutoff, BoxOpts};
use pvlab::quad::cutoff::{integrate_band, integrate_boundary, pairing_factor, radial_oracle};
use pvlab::quad::gauss::gauss_legendre;
use pvlab::quad::{integrate_cutoff, sweep, EpsGrid, QuadOpts, Weight};
use pvlab::symbolic::Poly;
use pvlab::testform::{named_form, TestForm};

const ZERO: Complex<f64> = Complex::new(0.0, 0.0);

fn z_pow(k: u32) -> (Poly, TestForm) {
    let form = named_form("poly", &["z"]).unwrap();
    (Poly::var(form.ring(), 0).pow(k), form)
}

fn bump(t: f64) -> f64 {
    if t < 1.0 {
        (1.0 / (t - 1.0)).exp()
    } else {
        0.0
    }
}

#[test]
fn pairing_factor_powers() {
    assert_eq!(pairing_factor(1), Complex::new(0.0, -2.0));
    assert_eq!(pairing_factor(2), Complex::new(-4.0, 0.0));
}

#[test]
fn gauss_legendre_is_exact_on_polynomials() {
    let (x, w) = gauss_legendre(8);
    for p in 0..16 {
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
        let exact = if p % 2 == 0 { 2.0 / (p as f64 + 1.0) } else { 0.0 };
        assert!((s - exact).abs() < 1e-14, "degree {p}");
    }
}

#[test]
fn radial_cutoff_matches_one_dimensional_oracle() {
    let form = named_form("radial", &["z"]).unwrap();
    let f = Poly::var(form.ring(), 0);
    for lam in [Complex::new(0.3, 0.0), Complex::new(0.5, 0.25), Complex::new(-0.4, 0.0)] {
        let eps = 0.05;
        let got = integrate_cutoff(&f, &Weight::new(lam, 0), &form, eps, &QuadOpts::default()).unwrap();
        let want = radial_oracle(|r| Complex::new(bump(r * r), 0.0), lam, eps, 1.0, 1e-13);
        assert!((got.value - want.value).norm() <= 1e-10 * want.value.norm(), "{lam}: {} vs {}", got.value, want.value);
    }
}

#[test]
fn refinement_never_increases_discrepancy() {
    let form = named_form("radial", &["z"]).unwrap();
    let f = Poly::var(form.ring(), 0);
    let lam = Complex::new(0.3, 0.1);
    let want = radial_oracle(|r| Complex::new(bump(r * r), 0.0), lam, 0.01, 1.0, 1e-14).value;
    let mut prev = f64::INFINITY;
    let mut tol = 1e-4;
    while tol > 1e-12 {
        let opts = QuadOpts { tol, ..QuadOpts::default() };
        let got = integrate_cutoff(&f, &Weight::new(lam, 0), &form, 0.01, &opts).unwrap().value;
        let d = (got - want).norm();
        assert!(d <= prev.max(1e-13 * want.norm()), "tol {tol:e}: {d:e} after {prev:e}");
        prev = d;
        tol /= 2.0;
    }
}

#[test]
fn boundary_integrals_select_one_frequency() {
    let r = named_form("radial", &["z"]).unwrap();
    let z = Poly::var(r.ring(), 0);
    for n in 0..3i64 {
        for m in 0..5u32 {
            let psi = r.mul_poly(&z.pow(m)).unwrap();
            for eps in [0.5, 0.1, 0.02] {
                let v = integrate_boundary(n, &psi, eps, 256).value;
                // z^{m−N} dz̄ on |z| = ε carries e^{i(m−N−1)θ}
                let want = if m as i64 == n + 1 {
                    Complex::new(0.0, -2.0 * std::f64::consts::PI) * eps * eps * bump(eps * eps)
                } else {
                    ZERO
                };
                let scale = 2.0 * std::f64::consts::PI * eps.powi(m as i32 - n as i32 + 1);
                assert!((v - want).norm() <= 1e-10 * scale, "N={n} m={m} ε={eps}: {v}");
            }
        }
    }
}

#[test]
fn polar_and_box_engines_agree() {
    let (f, form) = z_pow(1);
    let form = form.mul_poly(&f).unwrap();
    let w = Weight::new(Complex::new(0.3, 0.0), 1);
    let polar = integrate_cutoff(&f, &w, &form, 0.1, &QuadOpts::default()).unwrap().value;
    let boxed = box_cutoff(&f, &w, &form, 0.1, &BoxOpts::default()).unwrap().value;
    assert!((polar - boxed).norm() <= 1e-5 * polar.norm(), "{polar} vs {boxed}");
}

#[test]
fn sweep_matches_pointwise_integrals() {
    for k in [1, 2] {
        let (f, form) = z_pow(k);
        let w = Weight::new(Complex::new(0.2, 0.1), 1).with_log(1);
        let grid = EpsGrid::new(0.5, 0.6, 6).unwrap();
        let s = sweep(&f, &w, &form, &grid, &QuadOpts::default(), "poly").unwrap();
        assert_eq!(s.len(), 6);
        for (e, v) in s.eps.iter().zip(&s.values) {
            let direct = integrate_cutoff(&f, &w, &form, *e, &QuadOpts::default()).unwrap().value;
            assert!((direct - v).norm() <= 1e-9 * direct.norm().max(1e-12));
        }
    }
}

#[test]
fn product_carrier_factorizes_for_radial_bumps() {
    let form = named_form("radial", &["z1", "z2"]).unwrap();
    let r = form.ring().clone();
    let f = &Poly::var(&r, 0) * &Poly::var(&r, 1);
    let lam = Complex::new(0.3, 0.0);
    let two = integrate_cutoff(&f, &Weight::new(lam, 0), &form, 0.0, &QuadOpts::default()).unwrap().value;
    let one = radial_oracle(|r| Complex::new(bump(r * r), 0.0), lam, 0.0, 1.0, 1e-13).value;
    assert!((two - one * one).norm() <= 1e-9 * two.norm(), "{two} vs {}", one * one);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn band_is_difference_of_cutoffs(k in 1u32..=3, lam in 0.0f64..0.8, n in 0i64..=2, e1 in 0.05f64..0.6, ratio in 0.1f64..0.9) {
        let (f, form) = z_pow(k);
        let e2 = e1 * ratio;
        let w = Weight::new(Complex::new(lam, 0.1), n);
        let q = QuadOpts::default();
        let band = integrate_band(&f, &w, &form, e2, e1, &q).unwrap();
        let a = integrate_cutoff(&f, &w, &form, e2, &q).unwrap();
        let b = integrate_cutoff(&f, &w, &form, e1, &q).unwrap();
        let d = (band.value - (a.value - b.value)).norm();
        let budget = band.error + a.error + b.error + 1e-14;
        prop_assert!(d <= 1e-8 * a.value.norm().max(b.value.norm()) + budget, "{d:e}");
    }
}
