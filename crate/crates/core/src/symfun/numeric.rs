//! Numeric smoke tests: Monte Carlo pairing of `π_* X_λ` against `Q^* ξ`,
//! and the constant of `∂_z(1/z̄)`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SymContext;
use crate::error::{Error, Result};
use crate::quad::{adaptive, integrate_cutoff, AdaptiveOpts, QuadOpts, Weight};
use crate::symbolic::poly::Poly;
use crate::symbolic::rat::{rat_to_f64, GaussRat};
use crate::testform::TestForm;
use crate::weyl::DiffOperator;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PairingOpts {
    pub samples: usize,
    pub seed: u64,
    /// Samples above this count are refused.
    pub budget: usize,
}

impl Default for PairingOpts {
    fn default() -> Self {
        PairingOpts { samples: 2_000_000, seed: 7, budget: 20_000_000 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingResidual {
    /// Estimate of `⟨π_* X_λ, Q^* ξ⟩`.
    pub value: Complex<f64>,
    /// Estimate of `∫ |X_λ| |π^*(Q^* ξ)|`, the scale of the pairing.
    pub scale: f64,
    /// `|value| / scale`.
    pub relative: f64,
    /// Standard error of `value`.
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// `⟨π_* X_λ, Q^* ξ⟩ = ∫ X_λ(z) (Q^*ξ)(σ(z)) |Δ(z)| dA(z)` for `k = 2`,
/// sampled uniformly on a polydisc containing the preimage of the support.
pub fn numeric_pairing_check(
    ctx: &SymContext,
    q: &DiffOperator,
    lambda: &GaussRat,
    xi: &TestForm,
    opts: &PairingOpts,
) -> Result<PairingResidual> {
    if ctx.k != 2 {
        return Err(Error::InvalidArgument("numeric pairing is implemented for k = 2".into()));
    }
    let lam = lambda.to_complex();
    if lam.re < 0.0 {
        return Err(Error::InvalidArgument("Re(lambda) must be non-negative".into()));
    }
    if opts.samples > opts.budget {
        return Err(Error::BudgetExceeded { estimate: Complex::new(f64::NAN, f64::NAN), error: f64::INFINITY });
    }
    let eta = xi.apply_adjoint(&q.at_lambda(lambda))?;
    let cf = eta.compile::<f64>(lam);
    // Fujiwara: every root has |z| ≤ 2 max |σ_h|^{1/h}
    let mut bound: f64 = 0.0;
    for h in 0..2 {
        let reach = xi.centers()[h].to_complex().norm() + rat_to_f64(&xi.radii()[h]);
        bound = bound.max(reach.powf(1.0 / (h + 1) as f64));
    }
    let r = 2.0 * bound;
    let vol = (std::f64::consts::PI * r * r).powi(2);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut disc = || {
        let rho = r * rng.gen::<f64>().sqrt();
        let th = rng.gen::<f64>() * std::f64::consts::TAU;
        Complex::from_polar(rho, th)
    };
    let mut sum = Complex::new(0.0, 0.0);
    let mut sum2 = 0.0;
    let mut abs = 0.0;
    for _ in 0..opts.samples {
        let z1 = disc();
        let z2 = disc();
        let s = [z1 + z2, z1 * z2];
        let e = cf.eval(&s);
        if e.re == 0.0 && e.im == 0.0 {
            continue;
        }
        let x = Complex::new(z1.norm_sqr(), 0.0).powc(lam) + Complex::new(z2.norm_sqr(), 0.0).powc(lam);
        let v = x * e * (z1 - z2).norm_sqr();
        sum += v;
        sum2 += v.norm_sqr();
        abs += v.norm();
    }
    let n = opts.samples as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean.norm_sqr()).max(0.0);
    let value = mean * vol;
    let scale = abs / n * vol;
    Ok(PairingResidual {
        value,
        scale,
        relative: if scale > 0.0 { value.norm() / scale } else { 0.0 },
        std_error: (var / n).sqrt() * vol,
        samples: opts.samples,
        seed: opts.seed,
    })
}

/// `⟨∂_z(1/z̄), ξ⟩ = c·φ(0)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeltaConstant {
    pub form: String,
    /// `−⟨1/z̄, ∂_z ξ⟩` by the cutoff quadrature.
    pub pairing: Complex<f64>,
    pub phi0: Complex<f64>,
    pub c: Complex<f64>,
    /// `c` from the one-dimensional radial integral `2πi ∫₀¹ ψ'(s) ds / ψ(0)`
    /// for the unit radial bump `ψ(|z|²)`.
    pub radial_oracle: Complex<f64>,
}

pub fn delta_constant(form: &TestForm, label: &str, quad: &QuadOpts) -> Result<DeltaConstant> {
    if form.dim() != 1 {
        return Err(Error::InvalidArgument("one-dimensional test form expected".into()));
    }
    let f = Poly::var(form.ring(), 0);
    let w = Weight::new(Complex::new(0.0, 0.0), 0).with_conj_power(-1);
    let dz = form.diff(0)?;
    let pairing = -integrate_cutoff(&f, &w, &dz, 0.0, quad)?.value;
    let phi0 = form.eval(&[Complex::new(0.0, 0.0)], Complex::new(0.0, 0.0));
    if phi0.norm() < 1e-300 {
        return Err(Error::InvalidArgument("test form vanishes at the origin".into()));
    }
    let psi = |s: f64| if s < 1.0 { (1.0 / (s - 1.0)).exp() } else { 0.0 };
    let dpsi = |s: f64| if s < 1.0 { -psi(s) / ((s - 1.0) * (s - 1.0)) } else { 0.0 };
    let integral = adaptive::<f64>(|s| Complex::new(dpsi(s), 0.0), &[0.0, 1.0], AdaptiveOpts::default()).value;
    let radial_oracle = Complex::new(0.0, std::f64::consts::TAU) * integral / psi(0.0);
    Ok(DeltaConstant { form: label.into(), pairing, phi0, c: pairing / phi0, radial_oracle })
}
