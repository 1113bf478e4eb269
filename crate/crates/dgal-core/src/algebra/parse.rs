//! Text grammar for polynomials and rational functions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | 't' | 'g' | x_I_J | y_I | w_I_J | '(' expr ')'
//! ```
//!
//! `g` is the generator of the constant field. Division is only allowed by
//! expressions free of matrix variables.

use super::field::{Field, Rational};
use super::multipoly::{MultiPoly, Ring, Var};
use super::numfield::{Nf, NumberField};
use super::ratfunc::RatFunc;
use super::AlgebraError;
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::Arc;

type Coef = RatFunc<Nf>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring>,
    field: &'a NumberField,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str, AlgebraError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn index(&mut self) -> Result<usize, AlgebraError> {
        if self.src.get(self.pos) != Some(&b'_') {
            return self.err("expected `_`");
        }
        self.pos += 1;
        let d = self.digits()?;
        match d.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => self.err("variable indices start at 1"),
        }
    }

    fn constant(&self, c: Coef) -> MultiPoly<Coef> {
        MultiPoly::constant(self.ring, c)
    }

    fn expr(&mut self) -> Result<MultiPoly<Coef>, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly<Coef>, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                self.skip_ws();
                let at = self.pos;
                let d = self.unary()?;
                if !d.is_constant() {
                    self.pos = at;
                    return self.err("division by a polynomial in matrix variables");
                }
                let c = d.constant_term();
                if c.is_zero() {
                    self.pos = at;
                    return self.err("division by zero");
                }
                acc = acc.scale(&c.inv());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly<Coef>, AlgebraError> {
        if self.eat(b'-') {
            return Ok(-&self.unary()?);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let d = self.digits()?;
            let e: u32 = match d.parse() {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn var(&mut self, v: Var) -> Result<MultiPoly<Coef>, AlgebraError> {
        if self.ring.index_of(v).is_none() {
            return self.err(format!("variable {v} is not declared"));
        }
        Ok(MultiPoly::var(self.ring, v))
    }

    fn atom(&mut self) -> Result<MultiPoly<Coef>, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                let n: BigInt = d.parse().expect("digits");
                Ok(self.constant(Coef::from_rational(&Rational::from_integer(n))))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(self.constant(Coef::t()))
            }
            Some(b'g') => {
                self.pos += 1;
                if self.field.is_rationals() {
                    return self.err("`g` used but the constant field is Q");
                }
                Ok(self.constant(Coef::constant(self.field.generator())))
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.index()?;
                let j = self.index()?;
                self.var(Var::X(i, j))
            }
            Some(b'w') => {
                self.pos += 1;
                let i = self.index()?;
                let j = self.index()?;
                self.var(Var::W(i, j))
            }
            Some(b'y') => {
                self.pos += 1;
                let i = self.index()?;
                self.var(Var::Y(i))
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse a polynomial over `k = F(t)` in the variables of `ring`.
pub fn parse_poly(src: &str, ring: &Arc<Ring>, field: &NumberField) -> Result<MultiPoly<Coef>, AlgebraError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, ring, field };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parse an element of `F(t)`.
pub fn parse_ratfunc(src: &str, field: &NumberField) -> Result<Coef, AlgebraError> {
    let ring = Ring::new(Vec::new(), super::multipoly::MonoOrder::Grevlex);
    Ok(parse_poly(src, &ring, field)?.constant_term())
}

/// Parse a polynomial in `g` with rational coefficients, e.g. a minimal polynomial.
pub fn parse_rational_poly(src: &str) -> Result<super::poly::Poly<Rational>, AlgebraError> {
    let f = parse_ratfunc(&src.replace('g', "t"), &NumberField::rationals())?;
    if !f.is_polynomial() {
        return Err(AlgebraError::Parse { pos: 0, msg: "expected a polynomial".into() });
    }
    Ok(f.num().map(|c| c.as_rational().expect("rational coefficient")))
}
