use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pvlab::symbolic::field::{DiffField, RatFn};
use pvlab::symbolic::ring::{Ring, RingRef};
use pvlab::symbolic::rat::rat;
use pvlab::symbolic::{Exponent, GaussRat, LogSymbol, Poly, PowerLogExpr, Side};
use pvlab::weyl::catalog::{catalog_from_json, catalog_json, datum_z_power};
use pvlab::weyl::{catalog, lookup, DiffOperator};

fn ring() -> RingRef {
    Ring::coordinates(&["z"])
}

// variables: z zb u_z lam
fn small_poly(side: Side) -> impl Strategy<Value = Poly> {
    let v = if side == Side::Holo { 0 } else { 1 };
    prop::collection::vec((-3i64..=3, 0u16..=2, 0u16..=1), 1..=3).prop_map(move |ts| {
        let r = ring();
        let mut p = Poly::zero(&r);
        for (c, e, l) in ts {
            let mut m = vec![0u16; r.len()];
            m[v] = e;
            m[3] = l;
            p = &p + &Poly::monomial(&r, m, GaussRat::int(c));
        }
        p
    })
}

fn operator(side: Side) -> impl Strategy<Value = DiffOperator> {
    let v = if side == Side::Holo { 0 } else { 1 };
    prop::collection::vec((small_poly(side), 0u16..=2), 1..=3).prop_map(move |ts| {
        let r = ring();
        let terms = ts.into_iter().map(|(c, k)| {
            let mut m = vec![0u16; r.len()];
            m[v] = k;
            (c, m)
        });
        DiffOperator::from_terms(&r, side, terms).unwrap()
    })
}

fn expr() -> impl Strategy<Value = PowerLogExpr<RatFn>> {
    (small_poly(Side::Holo), -1i64..=1, 0u32..=1).prop_map(|(c, s, q)| {
        let r = ring();
        let f = RatFn::from_poly(&Poly::var(&r, 0) * &Poly::var(&r, 0) + Poly::int(&r, 1));
        let logs = vec![LogSymbol { name: "f".into(), g: f.clone(), gbar: f.conj() }];
        let e = PowerLogExpr::new(f.clone(), f.conj(), logs);
        e.term_with_logs(
            RatFn::from_poly(c),
            Exponent::lambda_plus(GaussRat::int(s)),
            Exponent::lambda_plus(GaussRat::int(0)),
            vec![q],
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_acts_as_iterated_application(p in operator(Side::Holo), q in operator(Side::Holo), e in expr()) {
        let lhs = p.compose(&q).apply(&e).unwrap();
        let rhs = p.apply(&q.apply(&e).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn adjoint_is_an_involutive_anti_homomorphism(p in operator(Side::Holo), q in operator(Side::Holo)) {
        let lhs = p.compose(&q).adjoint();
        let rhs = q.adjoint().compose(&p.adjoint());
        prop_assert!(lhs.sub(&rhs).is_zero());
        prop_assert!(p.adjoint().adjoint().sub(&p).is_zero());
    }

    #[test]
    fn conjugate_operator_acts_on_conjugate_side(p in operator(Side::Holo)) {
        let c = p.conjugate();
        prop_assert_eq!(c.side(), Side::Anti);
        prop_assert!(c.conjugate().sub(&p).is_zero());
    }
}

#[test]
fn catalog_certificates_are_exact() {
    for d in catalog() {
        let c = d.verify().unwrap();
        assert!(c.passed, "{}: {}", c.name, c.residual);
        assert_eq!(c.residual, "0");
        for m in 2..=5 {
            let c = d.verify_iterated(m).unwrap();
            assert!(c.passed, "{}: {}", c.name, c.residual);
        }
    }
}

#[test]
fn b_roots_are_rational_and_negative() {
    for d in catalog() {
        assert!(d.check_roots().passed, "{}", d.name);
        let b = d.b();
        let lam = d.ring.lambda().unwrap();
        for (r, _) in &d.b_roots {
            assert!(*r < rat(0, 1));
            assert!(b.partial_eval(lam, &GaussRat::real(r.clone())).is_zero());
        }
    }
}

#[test]
fn b_of_z_powers_matches_closed_form() {
    // b(λ) = Π_{i=1}^k (λ + i/k), evaluated at λ = 1 directly
    for k in 1..=4u16 {
        let d = datum_z_power(k);
        let lam = d.ring.lambda().unwrap();
        let v = d.b().partial_eval(lam, &GaussRat::int(1)).constant_term();
        let mut expect = GaussRat::int(1);
        for i in 1..=k as i64 {
            expect = &expect * &GaussRat::new(rat(k as i64 + i, k as i64), rat(0, 1));
        }
        assert_eq!(v, expect, "k = {k}");
    }
}

#[test]
fn iterated_b_factors_for_z() {
    let d = lookup("z").unwrap();
    let lam = d.ring.lambda().unwrap();
    let b3 = d.b_m(3);
    let l = Poly::var(&d.ring, lam);
    let expect = &(&(&l + &Poly::int(&d.ring, 1)) * &(&l + &Poly::int(&d.ring, 2))) * &(&l + &Poly::int(&d.ring, 3));
    assert_eq!(b3, expect);
    let mut roots: Vec<_> = d.b_m_roots(3);
    roots.sort();
    assert_eq!(roots, vec![rat(-3, 1), rat(-2, 1), rat(-1, 1)]);
}

#[test]
fn functional_equation_holds_numerically() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in catalog() {
        let err = d.numeric_check(&mut rng, 40, 1e-6).unwrap();
        assert!(err <= 1e-10, "{}: {err:e}", d.name);
    }
}

#[test]
fn catalog_json_round_trip() {
    let j = catalog_json();
    let text = serde_json::to_string(&j).unwrap();
    let back: pvlab::weyl::catalog::CatalogJson = serde_json::from_str(&text).unwrap();
    let data = catalog_from_json(&back).unwrap();
    assert_eq!(data.len(), catalog().len());
    for (a, b) in data.iter().zip(catalog()) {
        assert_eq!(a.name, b.name);
        assert_eq!(a.f, b.f);
        assert_eq!(a.b(), b.b());
        assert!(a.verify().unwrap().passed);
    }
}

#[test]
fn wrong_b_is_rejected() {
    let mut j = catalog_json();
    for e in &mut j.entries {
        e.b_factored[0].0 -= e.b_factored[0].1;
    }
    for d in catalog_from_json(&j).unwrap() {
        let c = d.verify().unwrap();
        assert!(!c.passed, "{}", d.name);
        assert_ne!(c.residual, "0");
    }
}

#[test]
fn b_at_agrees_with_expanded_polynomial() {
    let d = lookup("z1*z2").unwrap();
    let lam = d.ring.lambda().unwrap();
    let b2 = d.b_m(2);
    let x = Complex::new(0.3, -0.2);
    let mut vals = vec![Complex::new(0.0, 0.0); d.ring.len()];
    vals[lam] = x;
    let direct = b2.eval(&vals);
    assert!((d.b_at(2, x) - direct).norm() < 1e-14);
}
