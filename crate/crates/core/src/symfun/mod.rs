//! Symmetric functions of `k` roots: the quotient map `π: z ↦ σ`, the ideal
//! `𝓘` of the trace functions, the fields `U₋₁, U₀, U₁`, and exact
//! certificates for the identities they satisfy.
//!
//! Ideal membership is certified on the family of power sums only: a failed
//! certificate is conclusive, a passed one is evidence.

pub mod certificate;
pub mod numeric;
pub mod smooth;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::expr::Side;
use crate::symbolic::poly::Poly;
use crate::symbolic::rat::GaussRat;
use crate::symbolic::ring::{Ring, RingRef};
use crate::weyl::DiffOperator;

pub use certificate::{Bundle, Certificate, Status};
pub use numeric::{delta_constant, numeric_pairing_check, DeltaConstant, PairingOpts, PairingResidual};
pub use smooth::{conjugate_generator_checks, xdist_annihilation_check, Biradical, Reading, SmoothLocus, XCase};

/// Which of the three fields `U_j = π_* V_j`, `V_j = Σ z^{j+1} ∂_{z}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Minus,
    Zero,
    Plus,
}

impl Field {
    pub fn all() -> [Field; 3] {
        [Field::Minus, Field::Zero, Field::Plus]
    }

    pub fn label(self) -> &'static str {
        match self {
            Field::Minus => "U_-1",
            Field::Zero => "U_0",
            Field::Plus => "U_1",
        }
    }
}

/// Coordinates `z₁..z_k` upstairs and `σ₁..σ_k` downstairs, with `σ_h` as
/// polynomials in `z`.
#[derive(Clone, Debug)]
pub struct SymContext {
    pub k: usize,
    /// `σ`-space universe (also the universe of test forms on it).
    pub sigma_ring: RingRef,
    pub z_ring: RingRef,
    /// `σ_h(z)`, `h = 1..k`.
    pub sigma_z: Vec<Poly>,
}

impl SymContext {
    pub fn new(k: usize) -> Result<Self> {
        if !(2..=3).contains(&k) {
            return Err(Error::InvalidArgument(format!("k = {k}: only 2 ≤ k ≤ 3 is supported")));
        }
        let sn: Vec<String> = (1..=k).map(|h| format!("s{h}")).collect();
        let zn: Vec<String> = (1..=k).map(|h| format!("z{h}")).collect();
        let sigma_ring = Ring::coordinates(&sn.iter().map(String::as_str).collect::<Vec<_>>());
        let z_ring = Ring::coordinates(&zn.iter().map(String::as_str).collect::<Vec<_>>());
        // Π (1 + z_j t) = Σ σ_h t^h
        let mut e = vec![Poly::one(&z_ring)];
        for j in 0..k {
            let zj = Poly::var(&z_ring, j);
            let mut next = vec![Poly::zero(&z_ring); e.len() + 1];
            for (h, c) in e.iter().enumerate() {
                next[h] = &next[h] + c;
                next[h + 1] = &next[h + 1] + &(c * &zj);
            }
            e = next;
        }
        Ok(SymContext { k, sigma_ring, z_ring, sigma_z: e[1..].to_vec() })
    }

    /// `σ_h` as a coordinate on `σ`-space; zero for `h > k`.
    pub fn sigma(&self, h: usize) -> Poly {
        if h == 0 {
            Poly::one(&self.sigma_ring)
        } else if h <= self.k {
            Poly::var(&self.sigma_ring, h - 1)
        } else {
            Poly::zero(&self.sigma_ring)
        }
    }

    /// `∂/∂σ_h`; the zero operator for `h` outside `1..=k`.
    pub fn partial(&self, h: usize) -> DiffOperator {
        if h == 0 || h > self.k {
            return DiffOperator::zero(&self.sigma_ring, Side::Holo);
        }
        DiffOperator::partial(&self.sigma_ring, h - 1).expect("holomorphic coordinate")
    }

    fn field_sum(&self, coeffs: impl Fn(usize) -> Poly) -> DiffOperator {
        let mut op = DiffOperator::zero(&self.sigma_ring, Side::Holo);
        for h in 1..=self.k {
            op = op.add(&self.partial(h).left_mul(&coeffs(h)));
        }
        op
    }

    /// `E = Σ σ_h ∂_h`.
    pub fn euler(&self) -> DiffOperator {
        self.field_sum(|h| self.sigma(h))
    }

    pub fn u(&self, which: Field) -> DiffOperator {
        let k = self.k as i64;
        match which {
            Field::Minus => self.field_sum(|h| {
                if h == 1 {
                    Poly::int(&self.sigma_ring, k)
                } else {
                    self.sigma(h - 1).scale(&GaussRat::int(k - h as i64 + 1))
                }
            }),
            Field::Zero => self.field_sum(|h| self.sigma(h).scale(&GaussRat::int(h as i64))),
            Field::Plus => self.field_sum(|h| {
                &(&self.sigma(1) * &self.sigma(h)) - &self.sigma(h + 1).scale(&GaussRat::int(h as i64 + 1))
            }),
        }
    }

    /// Multiplication by `lam`.
    pub fn lambda_op(&self) -> DiffOperator {
        let l = self.sigma_ring.lambda().expect("universe carries lam");
        DiffOperator::multiplication(&Poly::var(&self.sigma_ring, l), Side::Holo)
    }

    pub fn constant_op(&self, c: i64) -> DiffOperator {
        DiffOperator::multiplication(&Poly::int(&self.sigma_ring, c), Side::Holo)
    }

    /// `A_{p,q} = ∂_p∂_q − ∂_{p+1}∂_{q−1}`.
    pub fn a_pq(&self, p: usize, q: usize) -> DiffOperator {
        self.partial(p).compose(&self.partial(q)).sub(&self.partial(p + 1).compose(&self.partial(q - 1)))
    }

    /// `𝒯^m = ∂₁∂_{m−1} + ∂_m E`.
    pub fn t_m(&self, m: usize) -> DiffOperator {
        self.partial(1).compose(&self.partial(m - 1)).add(&self.partial(m).compose(&self.euler()))
    }

    /// Generators of `𝓘` with their labels.
    pub fn ideal_generators(&self) -> Vec<(String, DiffOperator)> {
        let mut out = Vec::new();
        for p in 1..self.k {
            for q in 2..=self.k {
                out.push((format!("A_{{{p},{q}}}"), self.a_pq(p, q)));
            }
        }
        for m in 2..=self.k {
            out.push((format!("T^{m}"), self.t_m(m)));
        }
        out
    }

    /// Power sum `p_m = Σ z_j^m` in the `σ` coordinates, by Newton's identities.
    pub fn power_sum(&self, m: usize) -> Poly {
        let mut p = vec![Poly::int(&self.sigma_ring, self.k as i64)];
        for n in 1..=m {
            let mut acc = self.sigma(n).scale(&GaussRat::int(if n % 2 == 1 { n as i64 } else { -(n as i64) }));
            for i in 1..n {
                let term = &self.sigma(i) * &p[n - i];
                acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
            }
            p.push(acc);
        }
        p.swap_remove(m)
    }

    /// `Σ z_j^m` upstairs.
    pub fn power_sum_z(&self, m: usize) -> Poly {
        let mut acc = Poly::zero(&self.z_ring);
        for j in 0..self.k {
            acc = &acc + &Poly::var(&self.z_ring, j).pow(m as u32);
        }
        acc
    }

    /// `p ∘ π`: a polynomial on `σ`-space pulled back to `z`-space.
    pub fn pullback(&self, p: &Poly) -> Result<Poly> {
        let k = self.k;
        let sbar: Vec<Poly> = self.sigma_z.iter().map(Poly::conj).collect();
        let lam_s = self.sigma_ring.lambda();
        let lam_z = self.z_ring.lambda();
        let mut out = Poly::zero(&self.z_ring);
        for (m, c) in p.terms() {
            let mut t = Poly::constant(&self.z_ring, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if i < k {
                    self.sigma_z[i].clone()
                } else if i < 2 * k {
                    sbar[i - k].clone()
                } else if Some(i) == lam_s {
                    Poly::var(&self.z_ring, lam_z.expect("universe carries lam"))
                } else {
                    return Err(Error::InvalidArgument(format!(
                        "cannot pull back variable {}",
                        self.sigma_ring.name(i)
                    )));
                };
                t = &t * &base.pow(e as u32);
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// `V_j = Σ z^{j+1} ∂_z` upstairs.
    pub fn v(&self, which: Field) -> DiffOperator {
        let pow = match which {
            Field::Minus => 0,
            Field::Zero => 1,
            Field::Plus => 2,
        };
        let mut op = DiffOperator::zero(&self.z_ring, Side::Holo);
        for j in 0..self.k {
            let d = DiffOperator::partial(&self.z_ring, j).expect("holomorphic coordinate");
            op = op.add(&d.left_mul(&Poly::var(&self.z_ring, j).pow(pow)));
        }
        op
    }

    /// `Δ = Π_{i<j} (z_i − z_j)²` upstairs.
    pub fn discriminant_z(&self) -> Poly {
        let mut acc = Poly::one(&self.z_ring);
        for i in 0..self.k {
            for j in i + 1..self.k {
                let d = &Poly::var(&self.z_ring, i) - &Poly::var(&self.z_ring, j);
                acc = &acc * &d.pow(2);
            }
        }
        acc
    }

    /// `Δ` as a polynomial in `σ`.
    pub fn discriminant_sigma(&self) -> Poly {
        let s = &self.sigma_ring;
        let text = match self.k {
            2 => "s1^2 - 4*s2",
            _ => "s1^2*s2^2 - 4*s2^3 - 4*s1^3*s3 + 18*s1*s2*s3 - 27*s3^2",
        };
        Poly::parse(s, text).expect("discriminant parses")
    }
}

/// `V(σ_h ∘ π) = (U σ_h) ∘ π` for every `h`.
pub fn pushforward_field_check(ctx: &SymContext, which: Field) -> Result<Certificate> {
    let v = ctx.v(which);
    let u = ctx.u(which);
    let mut bad = Vec::new();
    for h in 1..=ctx.k {
        let lhs = v.apply_poly(&ctx.sigma_z[h - 1])?;
        let rhs = ctx.pullback(&u.apply_poly(&ctx.sigma(h))?)?;
        let r = &lhs - &rhs;
        if !r.is_zero() {
            bad.push(format!("s{h}: {r}"));
        }
    }
    Ok(Certificate::exact(format!("pushforward {} (k={})", which.label(), ctx.k), bad))
}

/// Every generator of `𝓘` kills `p_m` for `m ≤ m_max`.
pub fn trace_annihilation_check(ctx: &SymContext, m_max: usize) -> Result<Certificate> {
    if m_max < ctx.k {
        return Err(Error::InvalidArgument(format!("m_max = {m_max} must be at least k = {}", ctx.k)));
    }
    let mut bad = Vec::new();
    for (name, g) in ctx.ideal_generators() {
        for m in 0..=m_max {
            let r = g.apply_poly(&ctx.power_sum(m))?;
            if !r.is_zero() {
                bad.push(format!("{name}(p_{m}) = {r}"));
            }
        }
    }
    Ok(Certificate::exact(format!("trace annihilation m<={m_max} (k={})", ctx.k), bad))
}

/// `(lhs − rhs)(p_m) = 0` for `m ≤ m_max`.
pub fn operator_identity_on_traces(
    ctx: &SymContext,
    name: &str,
    lhs: &DiffOperator,
    rhs: &DiffOperator,
    m_max: usize,
) -> Result<Certificate> {
    let d = lhs.try_add(&rhs.scale(&-GaussRat::int(1)))?;
    let mut bad = Vec::new();
    for m in 0..=m_max {
        let r = d.apply_poly(&ctx.power_sum(m))?;
        if !r.is_zero() {
            bad.push(format!("p_{m}: {r}"));
        }
    }
    Ok(Certificate::exact(format!("{name} on traces m<={m_max} (k={})", ctx.k), bad))
}

/// `U₋₁U₁ = (U₀+1)U₀` on the power sums.
pub fn factorization_identity(ctx: &SymContext, m_max: usize) -> Result<Certificate> {
    let lhs = ctx.u(Field::Minus).compose(&ctx.u(Field::Plus));
    let rhs = ctx.u(Field::Zero).add(&ctx.constant_op(1)).compose(&ctx.u(Field::Zero));
    operator_identity_on_traces(ctx, "U_-1 U_1 = (U_0+1) U_0", &lhs, &rhs, m_max)
}

/// The commutator `[U₋₁, U₁]` as an operator, compared with `2U₀`; the
/// comparison is reported, not asserted.
pub fn commutator_report(ctx: &SymContext) -> Certificate {
    let a = ctx.u(Field::Minus);
    let b = ctx.u(Field::Plus);
    let c = a.compose(&b).sub(&b.compose(&a));
    let two_u0 = ctx.u(Field::Zero).scale(&GaussRat::int(2));
    let diff = c.sub(&two_u0);
    Certificate {
        check: format!("commutator [U_-1, U_1] (k={})", ctx.k),
        status: Status::Reported,
        residual: if diff.is_zero() { "0".into() } else { diff.to_string() },
        expected_constant: None,
        derived_constant: Some(format!("[U_-1, U_1] = {c}")),
    }
}

/// Newton's identities, pulled back, reproduce `Σ z_j^m` exactly.
pub fn newton_check(ctx: &SymContext, m_max: usize) -> Result<Certificate> {
    let mut bad = Vec::new();
    for m in 0..=m_max {
        let r = &ctx.pullback(&ctx.power_sum(m))? - &ctx.power_sum_z(m);
        if !r.is_zero() {
            bad.push(format!("p_{m}: {r}"));
        }
    }
    Ok(Certificate::exact(format!("Newton identities m<={m_max} (k={})", ctx.k), bad))
}

/// `Δ(σ) ∘ π = Π (z_i − z_j)²`, and in the coordinates `x₁ = z₁`,
/// `x_h = z_h − z₁` the discriminant is `Π x_h² · Π_{2≤i<j} (x_i − x_j)²`.
pub fn discriminant_check(ctx: &SymContext) -> Result<Certificate> {
    let mut bad = Vec::new();
    let r = &ctx.pullback(&ctx.discriminant_sigma())? - &ctx.discriminant_z();
    if !r.is_zero() {
        bad.push(format!("Δ(σ(z)) − Π(z_i−z_j)² = {r}"));
    }
    let xn: Vec<String> = (1..=ctx.k).map(|h| format!("x{h}")).collect();
    let xr = Ring::coordinates(&xn.iter().map(String::as_str).collect::<Vec<_>>());
    let x = |h: usize| Poly::var(&xr, h);
    let z: Vec<Poly> = (0..ctx.k).map(|h| if h == 0 { x(0) } else { &x(h) + &x(0) }).collect();
    let mut lhs = Poly::one(&xr);
    for i in 0..ctx.k {
        for j in i + 1..ctx.k {
            lhs = &lhs * &(&z[i] - &z[j]).pow(2);
        }
    }
    let mut rhs = Poly::one(&xr);
    for h in 1..ctx.k {
        rhs = &rhs * &x(h).pow(2);
    }
    for i in 1..ctx.k {
        for j in i + 1..ctx.k {
            rhs = &rhs * &(&x(i) - &x(j)).pow(2);
        }
    }
    let r = &lhs - &rhs;
    if !r.is_zero() {
        bad.push(format!("shifted coordinates: {r}"));
    }
    Ok(Certificate::exact(format!("discriminant (k={})", ctx.k), bad))
}

/// All exact polynomial certificates for `k`, with power sums up to `m_max`.
pub fn polynomial_certificates(ctx: &SymContext, m_max: usize) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for f in Field::all() {
        out.push(pushforward_field_check(ctx, f)?);
    }
    out.push(newton_check(ctx, m_max)?);
    out.push(discriminant_check(ctx)?);
    out.push(trace_annihilation_check(ctx, m_max)?);
    out.push(factorization_identity(ctx, m_max)?);
    out.push(commutator_report(ctx));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_sums_k2() {
        let c = SymContext::new(2).unwrap();
        let s = &c.sigma_ring;
        assert_eq!(c.power_sum(2), Poly::parse(s, "s1^2 - 2*s2").unwrap());
        assert_eq!(c.power_sum(3), Poly::parse(s, "s1^3 - 3*s1*s2").unwrap());
        assert_eq!(c.power_sum(0), Poly::int(s, 2));
    }

    #[test]
    fn fields_k2() {
        let c = SymContext::new(2).unwrap();
        let s = &c.sigma_ring;
        let u = c.u(Field::Minus);
        assert_eq!(u.apply_poly(&c.sigma(1)).unwrap(), Poly::int(s, 2));
        assert_eq!(u.apply_poly(&c.sigma(2)).unwrap(), c.sigma(1));
        assert_eq!(c.u(Field::Zero).apply_poly(&c.sigma(2)).unwrap(), c.sigma(2).scale(&GaussRat::int(2)));
        let t2 = c.t_m(2);
        assert!(t2.apply_poly(&c.power_sum(2)).unwrap().is_zero());
        assert!(c.a_pq(1, 2).is_zero());
    }
}
