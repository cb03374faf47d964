use num_complex::Complex;
use proptest::prelude::*;

use pvlab::quad::QuadOpts;
use pvlab::symbolic::GaussRat;
use pvlab::symfun::{
    conjugate_generator_checks, delta_constant, discriminant_check, factorization_identity, newton_check,
    numeric_pairing_check, polynomial_certificates, pushforward_field_check, trace_annihilation_check,
    xdist_annihilation_check, Field, PairingOpts, SmoothLocus, Status, SymContext, XCase,
};
use pvlab::testform::named_form;

fn elementary(z: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let mut e = vec![Complex::new(1.0, 0.0)];
    for &zj in z {
        let mut next = vec![Complex::new(0.0, 0.0); e.len() + 1];
        for (h, c) in e.iter().enumerate() {
            next[h] += c;
            next[h + 1] += c * zj;
        }
        e = next;
    }
    e[1..].to_vec()
}

#[test]
fn exact_certificates_k2_and_k3() {
    for k in [2, 3] {
        let ctx = SymContext::new(k).unwrap();
        for c in polynomial_certificates(&ctx, 8).unwrap() {
            assert!(c.passed(), "{}: {}", c.check, c.residual);
            if c.status == Status::Pass {
                assert_eq!(c.residual, "0");
            }
        }
    }
}

#[test]
fn individual_polynomial_checks() {
    let ctx = SymContext::new(2).unwrap();
    for f in Field::all() {
        assert_eq!(pushforward_field_check(&ctx, f).unwrap().status, Status::Pass);
    }
    assert_eq!(trace_annihilation_check(&ctx, 8).unwrap().status, Status::Pass);
    assert_eq!(factorization_identity(&ctx, 8).unwrap().status, Status::Pass);
    assert_eq!(newton_check(&ctx, 10).unwrap().status, Status::Pass);
    assert_eq!(discriminant_check(&ctx).unwrap().status, Status::Pass);
    assert!(trace_annihilation_check(&ctx, 1).is_err());
    assert!(SymContext::new(4).is_err());
}

#[test]
fn coordinate_change_identity_k3() {
    let ctx = SymContext::new(3).unwrap();
    let c = discriminant_check(&ctx).unwrap();
    assert_eq!(c.status, Status::Pass, "{}", c.residual);
}

#[test]
fn smooth_locus_annihilation_is_exact() {
    let sl = SmoothLocus::new().unwrap();
    for case in XCase::all() {
        for c in xdist_annihilation_check(&sl, case).unwrap() {
            assert_eq!(c.status, Status::Pass, "{}: {}", c.check, c.residual);
        }
    }
}

#[test]
fn conjugate_generator_report() {
    let sl = SmoothLocus::new().unwrap();
    let certs = conjugate_generator_checks(&sl).unwrap();
    for c in &certs {
        assert!(c.passed(), "{}: {}", c.check, c.residual);
    }
    let find = |s: &str| certs.iter().find(|c| c.check.starts_with(s)).unwrap_or_else(|| panic!("{s}"));
    let derived = |s: &str| find(s).derived_constant.clone().unwrap();
    assert_eq!(find("conj U_-1").status, Status::Pass);
    assert_eq!(derived("(conj U_0 - 1)(X_0 + Y_0)"), "-3");
    assert_eq!(find("(conj U_0 - 1)(X_0 + Y_0)").residual, "0");
    assert_eq!(derived("(conj U_0 + k)(X_0 + Y_0)"), "3");
    assert_eq!(find("(conj U_0 + k)(X_0 + Y_0)").expected_constant.as_deref(), Some("1"));
    assert_eq!(derived("(conj U_0 - 1) Z_1 = c Y_1 [Z_1 = sum|z_j|^2 - s1/s2b]"), "3");
    assert!(derived("(conj U_0 + k) Z_1 = (k+1) X_1 + ((k+1)/k) conj(s1 s2) Y_1 [Z_1 = sum|z_j|^2 - s1/s2b]").starts_with("holds"));
}

#[test]
fn roots_reconstruct_power_sums() {
    let ctx = SymContext::new(2).unwrap();
    for m in 0..=6 {
        let lhs = ctx.pullback(&ctx.power_sum(m)).unwrap();
        assert_eq!(lhs, ctx.power_sum_z(m), "p_{m}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn newton_round_trip_numeric(k in 2usize..=3, m in 0usize..=8, coords in prop::collection::vec(-1.5f64..1.5, 6)) {
        let ctx = SymContext::new(k).unwrap();
        let z: Vec<Complex<f64>> = (0..k).map(|j| Complex::new(coords[2 * j], coords[2 * j + 1])).collect();
        let s = elementary(&z);
        let mut vals = vec![Complex::new(0.0, 0.0); ctx.sigma_ring.len()];
        for h in 0..k {
            vals[h] = s[h];
            vals[k + h] = s[h].conj();
        }
        let got = ctx.power_sum(m).eval(&vals);
        let want: Complex<f64> = z.iter().map(|zj| zj.powu(m as u32)).sum();
        prop_assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0), "{got} vs {want}");
    }
}

#[test]
fn delta_constant_is_minus_two_pi_i() {
    for form in ["radial", "offset", "poly"] {
        let r = delta_constant(&named_form(form, &["z"]).unwrap(), form, &QuadOpts::default()).unwrap();
        assert!(r.c.re.abs() <= 1e-4 * std::f64::consts::TAU);
        assert!((r.c.im + std::f64::consts::TAU).abs() <= 1e-4 * std::f64::consts::TAU, "{form}: {}", r.c);
        assert!((r.c - r.radial_oracle).norm() <= 1e-4 * std::f64::consts::TAU);
    }
}

#[test]
fn pushforward_pairing_separates_annihilators() {
    let ctx = SymContext::new(2).unwrap();
    let xi = named_form("offset", &["s1", "s2"]).unwrap();
    let lam = GaussRat::frac(1, 2);
    let opts = PairingOpts { samples: 400_000, ..Default::default() };
    let ann = numeric_pairing_check(&ctx, &ctx.u(Field::Zero).sub(&ctx.lambda_op()), &lam, &xi, &opts).unwrap();
    let control = numeric_pairing_check(&ctx, &ctx.u(Field::Zero), &lam, &xi, &opts).unwrap();
    assert!(ann.relative < 4.0 * ann.std_error / ann.scale + 0.01, "{ann:?}");
    assert!(control.relative > 0.1, "{control:?}");
    let again = numeric_pairing_check(&ctx, &ctx.u(Field::Zero), &lam, &xi, &opts).unwrap();
    assert_eq!(again.value, control.value);
    let over = PairingOpts { samples: 10, budget: 5, seed: 1 };
    assert!(numeric_pairing_check(&ctx, &ctx.u(Field::Zero), &lam, &xi, &over).is_err());
}
