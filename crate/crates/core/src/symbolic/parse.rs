//! Parser for polynomial strings such as `"1/4*z1^2 + (z2 - i)^3"`.
//!
//! Grammar: sums and differences of products; `/` only by a constant;
//! `^` takes a non-negative integer; `i` is the imaginary unit unless the
//! universe declares a variable of that name. The output of `Poly`'s
//! `Display` parses back to the same polynomial.

use num_traits::Zero;

use super::poly::Poly;
use super::rat::{parse_rat, GaussRat};
use super::ring::RingRef;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < cs.len() {
        let c = cs[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = k;
            while k < cs.len() && (cs[k].is_ascii_digit() || cs[k] == '.') {
                k += 1;
            }
            if k < cs.len() && (cs[k] == 'e' || cs[k] == 'E') {
                let mut j = k + 1;
                if j < cs.len() && (cs[j] == '+' || cs[j] == '-') {
                    j += 1;
                }
                if j < cs.len() && cs[j].is_ascii_digit() {
                    k = j;
                    while k < cs.len() && cs[k].is_ascii_digit() {
                        k += 1;
                    }
                }
            }
            out.push(Tok::Num(cs[st..k].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let st = k;
            while k < cs.len() && (cs[k].is_alphanumeric() || cs[k] == '_') {
                k += 1;
            }
            out.push(Tok::Ident(cs[st..k].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            k += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a RingRef,
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if !d.is_constant() || d.constant_term().is_zero() {
                    return Err(Error::Parse("division only by a nonzero constant".into()));
                }
                let inv = d.constant_term().inv().expect("nonzero");
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| Error::Parse(format!("bad exponent `{n}`")))?;
                    Ok(base.pow(e))
                }
                other => Err(Error::Parse(format!("expected exponent, found {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => Ok(Poly::constant(self.ring, GaussRat::real(parse_rat(&n)?))),
            Some(Tok::Ident(id)) => match self.ring.index(&id) {
                Ok(v) => Ok(Poly::var(self.ring, v)),
                Err(_) if id == "i" => Ok(Poly::constant(self.ring, GaussRat::i())),
                Err(e) => Err(e),
            },
            Some(Tok::Op('(')) => {
                let p = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(p)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

impl Poly {
    pub fn parse(ring: &RingRef, s: &str) -> Result<Poly> {
        let toks = lex(s)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut p = Parser { ring, toks, pos: 0 };
        let out = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::ring::Ring;

    #[test]
    fn parses_and_round_trips() {
        let r = Ring::coordinates(&["z1", "z2"]);
        let p = Poly::parse(&r, "1/4*z1^2 + (z2 - i)^2 - 0.5*lam*z1b").unwrap();
        let again = Poly::parse(&r, &p.to_string()).unwrap();
        assert_eq!(p, again);
        let z1 = Poly::var(&r, 0);
        assert_eq!(p.coeff(&[2, 0, 0, 0, 0, 0, 0]), GaussRat::frac(1, 4));
        assert_eq!(Poly::parse(&r, "(z1+1)*(z1-1)").unwrap(), &z1.pow(2) - &Poly::one(&r));
    }

    #[test]
    fn rejects_garbage() {
        let r = Ring::coordinates(&["z"]);
        assert!(Poly::parse(&r, "z +").is_err());
        assert!(Poly::parse(&r, "w").is_err());
        assert!(Poly::parse(&r, "1/z").is_err());
    }
}
