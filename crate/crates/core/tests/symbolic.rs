use num_complex::Complex;
use proptest::prelude::*;

use pvlab::symbolic::field::{DiffField, RatFn, SqrtExt};
use pvlab::symbolic::ring::{Ring, RingRef};
use pvlab::symbolic::{Exponent, GaussRat, LogSymbol, Poly, PowerLogExpr};

fn ring() -> RingRef {
    Ring::coordinates(&["z1", "z2"])
}

// variables: z1 z2 z1b z2b u_z1 u_z2 lam
const LAM: usize = 6;

fn coeff() -> impl Strategy<Value = GaussRat> {
    (-4i64..=4, 1i64..=3, -2i64..=2).prop_map(|(a, b, c)| GaussRat::new(
        pvlab::symbolic::rat::rat(a, b),
        pvlab::symbolic::rat::rat(c, 2),
    ))
}

fn poly_in(vars: Vec<usize>, max_terms: usize) -> impl Strategy<Value = Poly> {
    let nv = vars.len();
    prop::collection::vec((coeff(), prop::collection::vec(0u16..=2, nv)), 1..=max_terms).prop_map(move |ts| {
        let r = ring();
        let mut p = Poly::zero(&r);
        for (c, e) in ts {
            let mut m = vec![0u16; r.len()];
            for (k, &v) in vars.iter().enumerate() {
                m[v] = e[k];
            }
            p = &p + &Poly::monomial(&r, m, c);
        }
        p
    })
}

fn any_poly() -> impl Strategy<Value = Poly> {
    poly_in(vec![0, 1, 2, 3, LAM], 4)
}

fn holo_poly() -> impl Strategy<Value = Poly> {
    poly_in(vec![0, 1], 3)
}

type Expr = PowerLogExpr<RatFn>;

fn expr() -> impl Strategy<Value = Expr> {
    let term = (any_poly(), poly_in(vec![0, 2], 2), -1i64..=1, -1i64..=1, 0u32..=2);
    (holo_poly(), prop::collection::vec(term, 1..=3)).prop_map(|(f, terms)| {
        let r = ring();
        let f = if f.is_zero() { Poly::var(&r, 0) } else { f };
        let fk = RatFn::from_poly(f);
        let logs = vec![LogSymbol { name: "f".into(), g: fk.clone(), gbar: fk.conj() }];
        let mut e = PowerLogExpr::new(fk.clone(), fk.conj(), logs);
        for (num, den, s, t, q) in terms {
            let den = &den + &Poly::int(&r, 3);
            let c = RatFn::new(num, den).expect("nonzero denominator");
            e.push(c, Exponent::lambda_plus(GaussRat::int(s)), Exponent::lambda_plus(GaussRat::int(t)), vec![q]);
        }
        e
    })
}

fn point() -> impl Strategy<Value = ([Complex<f64>; 2], Complex<f64>)> {
    (-1.5f64..1.5, -1.5f64..1.5, -1.5f64..1.5, -1.5f64..1.5, 0.1f64..0.9, -0.3f64..0.3)
        .prop_map(|(a, b, c, d, l, li)| ([Complex::new(a, b), Complex::new(c, d)], Complex::new(l, li)))
}

fn vals(z: &[Complex<f64>; 2], lam: Complex<f64>) -> Vec<Complex<f64>> {
    let zero = Complex::new(0.0, 0.0);
    vec![z[0], z[1], z[0].conj(), z[1].conj(), zero, zero, lam]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms(a in any_poly(), b in any_poly(), c in any_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&(&a - &a)).is_zero());
    }

    #[test]
    fn conjugation_is_an_involutive_ring_map(a in any_poly(), b in any_poly()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn polynomial_product_rule(a in any_poly(), b in any_poly(), v in 0usize..4) {
        prop_assert_eq!((&a * &b).deriv(v), &(&a.deriv(v) * &b) + &(&a * &b.deriv(v)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mixed_partials_commute(e in expr(), x in 0usize..4, y in 0usize..4) {
        let a = e.diff(x).diff(y);
        let b = e.diff(y).diff(x);
        prop_assert!(a.equals(&b), "∂{x}∂{y} differs");
    }

    #[test]
    fn derivative_matches_finite_differences(e in expr(), p in point(), var in 0usize..2) {
        let (z, lam) = p;
        let guard = 1e-3;
        let f0 = e.eval::<f64>(&vals(&z, lam), lam, guard);
        let d = e.diff(var).eval::<f64>(&vals(&z, lam), lam, guard);
        prop_assume!(f0.is_ok() && d.is_ok());
        let h = 1e-5;
        let at = |dz: Complex<f64>| {
            let mut w = z;
            w[var] += dz;
            e.eval::<f64>(&vals(&w, lam), lam, guard)
        };
        let samples = [at(Complex::new(h, 0.0)), at(Complex::new(-h, 0.0)), at(Complex::new(0.0, h)), at(Complex::new(0.0, -h))];
        prop_assume!(samples.iter().all(|s| s.is_ok()));
        let s: Vec<Complex<f64>> = samples.into_iter().map(|s| s.unwrap()).collect();
        // ∂_z = (∂_x − i∂_y)/2
        let fd: Complex<f64> = ((s[0] - s[1]) - Complex::<f64>::i() * (s[2] - s[3])) / (4.0 * h);
        let exact: Complex<f64> = d.unwrap();
        let scale = exact.norm().max(1e-3 * f0.unwrap().norm());
        prop_assert!((fd - exact).norm() <= 1e-6 * scale, "fd {fd} exact {exact}");
    }

    #[test]
    fn sqrt_ext_squares_and_conjugates(g in holo_poly(), u in any_poly(), v in any_poly(), w in any_poly()) {
        prop_assume!(!g.is_constant());
        let r = ring();
        let g = &(&g * &Poly::var(&r, 0)) + &Poly::int(&r, 1);
        let gk = RatFn::from_poly(g);
        let root = SqrtExt::root(gk.clone(), false);
        prop_assert!(root.mul(&root).equals(&root.lift(gk.clone())));
        let a = SqrtExt::new(RatFn::from_poly(u), RatFn::from_poly(v), gk.clone(), false);
        let b = root.lift(RatFn::from_poly(w)).add(&root);
        prop_assert!(a.mul(&b).conj().equals(&a.conj().mul(&b.conj())));
        prop_assert!(a.conj().conj().equals(&a));
        prop_assert!(a.swap_roots().swap_roots().equals(&a));
        if let Some(ai) = a.inv() {
            prop_assert!(a.mul(&ai).equals(&a.one_like()));
        }
    }
}

#[test]
fn conjugate_root_evaluates_to_conjugate_value() {
    let r = ring();
    let g = &Poly::var(&r, 0) + &Poly::int(&r, 2);
    let root = SqrtExt::root(RatFn::from_poly(g), false);
    let z = Complex::new(-3.0, 0.5);
    let v = vals(&[z, Complex::new(0.0, 0.0)], Complex::new(0.0, 0.0));
    let a = root.eval(&v, 1e-12).unwrap();
    let b = root.conj().eval(&v, 1e-12).unwrap();
    assert!((a.conj() - b).norm() < 1e-14);
    assert!((a * a - (z + 2.0)).norm() < 1e-14);
}

#[test]
fn parsed_polynomials_round_trip() {
    let r = ring();
    let p = Poly::parse(&r, "z1^2*z2b - 1/3*i*z2 + lam").unwrap();
    let q = Poly::parse(&r, &p.to_string()).unwrap();
    assert_eq!(p, q);
    assert!(Poly::parse(&r, "w").is_err());
}
