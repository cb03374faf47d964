use num_complex::Complex;

use pvlab::quad::Carrier;
use pvlab::regularize::{
    compare_t_s, default_m, exponent_lattice, fiber_expansion, finite_part, laurent_coeffs, merext_eval, pv_limit,
    MerextOpts, PvOpts,
};
use pvlab::testform::named_form;
use pvlab::weyl::lookup;
use pvlab::Error;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

#[test]
fn default_m_examples() {
    assert_eq!(default_m(0.0, 0), 2);
    assert_eq!(default_m(0.5, 2), 3);
    assert_eq!(default_m(1.5, 0), 0);
    assert_eq!(default_m(-1.3, 0), 5);
}

#[test]
fn lattice_for_z_squared() {
    let e = exponent_lattice(&Carrier::Power(2), c(0.0, 0.0), 4);
    let want = [1.0, 2.0, 3.0, 4.0];
    for (a, b) in e.iter().zip(want) {
        assert!((a.re - b).abs() < 1e-15);
    }
}

#[test]
fn principal_values_need_nonnegative_real_part() {
    let d = lookup("z").unwrap();
    let form = named_form("radial", &["z"]).unwrap();
    let r = pv_limit(&d.f, c(-0.5, 0.0), 0, 0, &form, &PvOpts::default());
    assert!(matches!(r, Err(Error::InvalidArgument(_))));
}

#[test]
fn continued_pairing_refuses_poles() {
    let d = lookup("z").unwrap();
    let form = named_form("radial", &["z"]).unwrap();
    let r = merext_eval(&d, c(-1.0, 0.0), 0, 0, &form, &MerextOpts::default());
    assert!(matches!(r, Err(Error::PoleAtLambda(_))), "{r:?}");
}

#[test]
fn laurent_constant_term_is_the_value_off_poles() {
    let d = lookup("z").unwrap();
    for (form, alpha) in [("offset", c(0.3, 0.0)), ("poly", c(-0.5, 0.25))] {
        let f = named_form(form, &["z"]).unwrap();
        let me = MerextOpts::default();
        let v = merext_eval(&d, alpha, 1, 0, &f, &me).unwrap().value;
        let l = laurent_coeffs(&d, alpha, 1, &f, 0.1, 32, &me).unwrap();
        let p0 = l.p(0).unwrap();
        assert!((p0 - v).norm() <= 1e-6 * v.norm(), "{form}: {p0} vs {v}");
        for k in 1..=3 {
            assert!(l.p(k).unwrap().norm() <= 1e-8 * l.scale(), "P_{k} should vanish off poles");
        }
    }
}

#[test]
fn log_power_is_the_alpha_derivative() {
    let d = lookup("z").unwrap();
    let f = named_form("poly", &["z"]).unwrap();
    let me = MerextOpts::default();
    let a = c(0.3, 0.0);
    let h = 1e-3;
    let q1 = merext_eval(&d, a, 1, 1, &f, &me).unwrap().value;
    let plus = merext_eval(&d, a + h, 1, 0, &f, &me).unwrap().value;
    let minus = merext_eval(&d, a - h, 1, 0, &f, &me).unwrap().value;
    let diff = (plus - minus) / (2.0 * h);
    assert!((q1 - diff).norm() <= 1e-3 * q1.norm(), "{q1} vs {diff}");
}

#[test]
fn z_squared_principal_value_matches_continuation() {
    let d = lookup("z^2").unwrap();
    let f = named_form("offset", &["z"]).unwrap();
    for (alpha, n) in [(c(0.3, 0.0), 0), (c(0.5, 0.25), 1)] {
        let r = compare_t_s(&d, alpha, n, 0, &f, &PvOpts::default(), &MerextOpts::default()).unwrap();
        assert!(r.rel_discrepancy <= 1e-4, "{r:?}");
    }
}

#[test]
fn fitted_models_respect_the_structural_invariant() {
    for k in 1..=3 {
        for form in ["radial", "offset", "poly"] {
            let fit = fiber_expansion(k, &named_form(form, &["z"]).unwrap(), 3).unwrap();
            assert!(fit.fitted.structural_ok(1e-6), "k={k} {form}");
            assert!(fit.oracle.structural_ok(0.0));
        }
    }
}

#[test]
fn divergence_exponent_tracks_the_dominant_counterterm() {
    let d = lookup("z").unwrap();
    for (alpha, form) in [(-1.3, "radial"), (-1.6, "radial"), (-1.3, "poly")] {
        let f = named_form(form, &["z"]).unwrap();
        let r = finite_part(&d.f, alpha, 0, 0, &f, &PvOpts::default()).unwrap();
        let dominant = r.counterterms.iter().map(|t| t.exponent).fold(f64::INFINITY, f64::min);
        assert!((dominant - (2.0 * alpha + 2.0)).abs() < 1e-12);
        assert!((r.divergence_exponent - dominant).abs() <= 1e-2, "{alpha} {form}: {}", r.divergence_exponent);
        assert!(r.corrected_slope > 0.0);
    }
}
