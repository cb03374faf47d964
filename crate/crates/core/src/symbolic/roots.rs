//! Rational-root extraction for univariate polynomials with rational coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::rat::{GaussRat, Rat};

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let Some(v) = n.to_u64() else {
        return vec![BigInt::one()];
    };
    if v == 0 {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
        if d > 1_000_000 {
            break;
        }
    }
    out
}

/// Dense coefficients (low to high) of a polynomial that only involves `var`
/// and has real rational coefficients.
fn dense_real(p: &Poly, var: usize) -> Option<Vec<Rat>> {
    let deg = p.degree_in(var) as usize;
    let mut c = vec![Rat::zero(); deg + 1];
    for (m, a) in p.terms() {
        if m.iter().enumerate().any(|(i, &e)| i != var && e > 0) || !a.is_real() {
            return None;
        }
        c[m[var] as usize] = a.re.clone();
    }
    Some(c)
}

fn eval_dense(c: &[Rat], x: &Rat) -> Rat {
    c.iter().rev().fold(Rat::zero(), |acc, a| acc * x + a)
}

fn deflate(c: &[Rat], x: &Rat) -> Vec<Rat> {
    // Synthetic division by (v - x).
    let n = c.len() - 1;
    let mut q = vec![Rat::zero(); n];
    let mut carry = Rat::zero();
    for k in (0..n).rev() {
        carry = &c[k + 1] + &carry * x;
        q[k] = carry.clone();
    }
    q
}

pub fn rational_roots(p: &Poly, var: usize) -> (Vec<(Rat, u32)>, Poly) {
    let ring = p.ring().clone();
    let Some(mut c) = dense_real(p, var) else {
        return (Vec::new(), p.clone());
    };
    let mut roots: Vec<(Rat, u32)> = Vec::new();
    // zero roots first
    while c.len() > 1 && c[0].is_zero() {
        c.remove(0);
        push_root(&mut roots, Rat::zero());
    }
    loop {
        if c.len() <= 1 {
            break;
        }
        let lcm = c
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let ints: Vec<BigInt> = c.iter().map(|a| (a * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let a0 = &ints[0];
        let an = &ints[ints.len() - 1];
        let mut found = None;
        'search: for pnum in small_divisors(a0) {
            for qden in small_divisors(an) {
                for sign in [1i32, -1] {
                    let cand = BigRational::new(pnum.clone() * sign, qden.clone());
                    if eval_dense(&c, &cand).is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                c = deflate(&c, &r);
                push_root(&mut roots, r);
            }
            None => break,
        }
    }
    let mut rest = Poly::zero(&ring);
    for (k, a) in c.iter().enumerate() {
        let mut m = vec![0u16; ring.len()];
        m[var] = k as u16;
        rest = &rest + &Poly::monomial(&ring, m, GaussRat::real(a.clone()));
    }
    (roots, rest)
}

fn push_root(roots: &mut Vec<(Rat, u32)>, r: Rat) {
    if let Some(e) = roots.iter_mut().find(|(x, _)| *x == r) {
        e.1 += 1;
    } else {
        roots.push((r, 1));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rat::rat;
    use crate::symbolic::ring::Ring;

    #[test]
    fn finds_repeated_negative_roots() {
        let r = Ring::coordinates(&["z"]);
        let l = r.lambda().unwrap();
        let lam = Poly::var(&r, l);
        let a = &lam + &Poly::constant(&r, GaussRat::frac(1, 2));
        let b = &lam + &Poly::one(&r);
        let p = &(&a * &b) * &b;
        let (roots, rest) = rational_roots(&p, l);
        assert!(rest.is_constant());
        assert!(roots.contains(&(rat(-1, 2), 1)));
        assert!(roots.contains(&(rat(-1, 1), 2)));
    }
}
