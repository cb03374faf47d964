use num_complex::Complex;
use proptest::prelude::*;

use pvlab::quad::{integrate_cutoff, QuadOpts, Weight};
use pvlab::symbolic::rat::rat;
use pvlab::symbolic::ring::Ring;
use pvlab::symbolic::{GaussRat, Poly, Side};
use pvlab::testform::{named_form, TestForm};
use pvlab::weyl::{catalog, DiffOperator};

const ZERO: Complex<f64> = Complex::new(0.0, 0.0);
const I: Complex<f64> = Complex::new(0.0, 1.0);

fn offset_poly_form() -> TestForm {
    let r = Ring::coordinates(&["z"]);
    let p = Poly::parse(&r, "1 + z - 1/2*i*zb + z*zb^2").unwrap();
    TestForm::make_bump(vec![GaussRat::parse("1/4-1/3i").unwrap()], vec![rat(3, 2)], p).unwrap()
}

/// `∫ density` under the pinned pairing.
fn pair(form: &TestForm) -> Complex<f64> {
    let names: Vec<String> = form.ring().names()[..form.dim()].to_vec();
    let r = form.ring();
    let mut f = Poly::one(r);
    for j in 0..names.len() {
        f = &f * &Poly::var(r, j);
    }
    integrate_cutoff(&f, &Weight::new(ZERO, 0), form, 0.0, &QuadOpts::default()).unwrap().value
}

#[test]
fn bump_examples() {
    let f = TestForm::unit(&["z"]);
    assert!((f.eval(&[ZERO], ZERO).re - (-1.0f64).exp()).abs() < 1e-16);
    assert_eq!(f.eval(&[Complex::new(1.0, 0.0)], ZERO), ZERO);
    let r = f.ring().clone();
    let c = GaussRat::parse("1/2+1/4i").unwrap();
    let g = TestForm::make_bump(vec![c.clone()], vec![rat(1, 1)], Poly::var(&r, 0)).unwrap();
    let v = g.eval(&[c.to_complex()], ZERO);
    assert!((v - c.to_complex() * (-1.0f64).exp()).norm() < 1e-16);
    assert!(TestForm::make_bump(vec![c], vec![rat(0, 1)], Poly::one(&r)).is_err());
}

#[test]
fn antiholomorphic_derivative_vanishes_at_center() {
    let f = TestForm::unit(&["z"]);
    let d = f.diff_side(1, Side::Anti).unwrap();
    assert_eq!(d.eval(&[ZERO], ZERO), ZERO);
}

#[test]
fn adjoint_examples() {
    let f = offset_poly_form();
    let r = f.ring().clone();
    let dbar = DiffOperator::partial(&r, 1).unwrap();
    let adj = f.apply_adjoint(&dbar).unwrap();
    assert_eq!(adj, f.diff(1).unwrap().scale(&GaussRat::int(-1)));
    assert_eq!(f.apply_adjoint(&DiffOperator::identity(&r, Side::Holo)).unwrap(), f);
}

#[test]
fn mixed_derivatives_commute_exactly() {
    for f in [offset_poly_form(), named_form("poly", &["z1", "z2"]).unwrap()] {
        let d = f.dim();
        for a in 0..2 * d {
            for b in 0..2 * d {
                let x = f.diff(a).unwrap().diff(b).unwrap();
                let y = f.diff(b).unwrap().diff(a).unwrap();
                assert_eq!(x.poly(), y.poly());
            }
        }
    }
}

#[test]
fn json_round_trip() {
    let f = offset_poly_form();
    let j = serde_json::to_string(&f.to_json()).unwrap();
    let back = TestForm::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back, f);
}

#[test]
fn high_derivatives_stay_finite_near_the_boundary() {
    let f = offset_poly_form();
    let c = f.centers()[0].to_complex();
    let mut forms = vec![f.clone()];
    for k in 0..6 {
        let last = forms.last().unwrap();
        forms.push(last.diff(k % 2).unwrap());
    }
    for g in &forms {
        let cf = g.compile::<f64>(ZERO);
        for i in 0..=400 {
            let s = 1.5 * (1.0 - (i as f64 / 400.0).powi(3));
            for a in 0..8 {
                let z = c + Complex::from_polar(s, a as f64 * 0.785);
                let v = cf.eval(&[z]);
                assert!(v.re.is_finite() && v.im.is_finite(), "non-finite at |z-c| = {s}");
            }
        }
    }
}

fn fd(form: &TestForm, z: Complex<f64>, var: usize) -> Complex<f64> {
    let h = 1e-5;
    let at = |dz: Complex<f64>| form.eval(&[z + dz], ZERO);
    let dx = (at(Complex::new(h, 0.0)) - at(Complex::new(-h, 0.0))) / (2.0 * h);
    let dy = (at(Complex::new(0.0, h)) - at(Complex::new(0.0, -h))) / (2.0 * h);
    if var == 0 {
        (dx - I * dy) / 2.0
    } else {
        (dx + I * dy) / 2.0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_outside_support(r in 1.5f64..10.0, th in 0.0f64..6.3) {
        let f = offset_poly_form();
        let z = f.centers()[0].to_complex() + Complex::from_polar(r, th);
        prop_assert_eq!(f.eval(&[z], ZERO), ZERO);
        prop_assert_eq!(f.diff(0).unwrap().diff(1).unwrap().eval(&[z], ZERO), ZERO);
    }

    #[test]
    fn derivative_matches_finite_differences(r in 0.0f64..1.2, th in 0.0f64..6.3, var in 0usize..2) {
        let f = offset_poly_form();
        let z = f.centers()[0].to_complex() + Complex::from_polar(r, th);
        let exact = f.diff(var).unwrap().eval(&[z], ZERO);
        let approx = fd(&f, z, var);
        prop_assert!((exact - approx).norm() <= 1e-6 * exact.norm().max(1e-3), "{exact} vs {approx}");
    }
}

/// `⟨P u, ξ⟩ = ⟨u, P^* ξ⟩` for a polynomial `u` and each catalog operator.
#[test]
fn integration_by_parts_for_catalog_operators() {
    for d in catalog() {
        if d.p.order() > 3 {
            continue;
        }
        let names: Vec<String> = d.ring.names()[..d.dim()].to_vec();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let xi = named_form("offset", &names).unwrap();
        let r = xi.ring().clone();
        let mut u = Poly::one(&r);
        for j in 0..d.dim() {
            u = &u * &Poly::parse(&r, &format!("1 + {0}^3 - 2*{0}*{0}b + i*{0}^2", names[j])).unwrap();
        }
        let p = &d.p;
        let lhs = pair(&xi.mul_poly(&p.apply_poly(&u).unwrap()).unwrap());
        let rhs = pair(&xi.apply_adjoint(&p).unwrap().mul_poly(&u).unwrap());
        assert!((lhs - rhs).norm() <= 1e-6 * lhs.norm(), "{}: {lhs} vs {rhs}", d.name);
    }
}
