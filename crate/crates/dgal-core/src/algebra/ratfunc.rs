//! Rational functions in `t` over a field, kept in canonical form.

use super::field::{Field, Rational};
use super::poly::Poly;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `num/den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let l = d.lc();
        if !l.is_one() {
            let inv = l.inv();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(a: F) -> Self {
        Self::from_poly(Poly::constant(a))
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<F> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// Value at `a`, or `None` at a pole.
    pub fn eval(&self, a: &F) -> Option<F> {
        let d = self.den.eval(a);
        (!d.is_zero()).then(|| self.num.eval(a) / d)
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative() * self.den.clone() - self.num.clone() * self.den.derivative();
        RatFunc::new(n, self.den.clone() * self.den.clone())
    }

    /// Taylor coefficients of `self` at `t = a` up to `(t-a)^order`.
    pub fn series_at(&self, a: &F, order: usize) -> Option<Vec<F>> {
        let n = self.num.taylor_shift(a);
        let d = self.den.taylor_shift(a);
        series_div(n.coeffs(), d.coeffs(), order + 1)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> RatFunc<G> {
        RatFunc::new(self.num.map(&f), self.den.map(&f))
    }

    /// Total degree `max(deg num, deg den)`.
    pub fn height(&self) -> usize {
        self.num.deg_or_zero().max(self.den.deg_or_zero())
    }

    pub fn render(&self) -> String {
        if self.den.is_one() {
            self.num.render("t")
        } else {
            format!("({})/({})", self.num.render("t"), self.den.render("t"))
        }
    }
}

/// First `len` coefficients of `n/d` as power series; `None` if `d(0) = 0`.
pub fn series_div<F: Field>(n: &[F], d: &[F], len: usize) -> Option<Vec<F>> {
    let d0 = d.first().filter(|x| !x.is_zero())?.inv();
    let mut out: Vec<F> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = n.get(k).cloned().unwrap_or_else(F::zero);
        for j in 1..=k.min(d.len().saturating_sub(1)) {
            if !d[j].is_zero() && !out[k - j].is_zero() {
                acc = acc - d[j].clone() * out[k - j].clone();
            }
        }
        out.push(acc * d0.clone());
    }
    Some(out)
}

impl<F: Field> Zero for RatFunc<F> {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Field> One for RatFunc<F> {
    fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
}

impl<F: Field> Add for RatFunc<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        if self.num.is_zero() {
            return o;
        }
        if o.num.is_zero() {
            return self;
        }
        if self.den == o.den {
            return RatFunc::new(self.num + o.num, self.den);
        }
        RatFunc::new(self.num * o.den.clone() + o.num * self.den.clone(), self.den * o.den)
    }
}

impl<F: Field> Sub for RatFunc<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<F: Field> Neg for RatFunc<F> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl<F: Field> Mul for RatFunc<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: self.num * o.num, den: self.den };
        }
        RatFunc::new(self.num * o.num, self.den * o.den)
    }
}

impl<F: Field> Div for RatFunc<F> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inv()
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn inv(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }
    fn from_rational(q: &Rational) -> Self {
        Self::constant(F::from_rational(q))
    }
    fn as_rational(&self) -> Option<Rational> {
        self.as_constant().and_then(|c| c.as_rational())
    }

    fn is_atomic(&self) -> bool {
        let mut nz = self.num.coeffs().iter().filter(|a| !a.is_zero());
        self.den.is_one()
            && match (nz.next(), nz.next()) {
                (Some(a), None) => a.is_atomic(),
                (None, _) => true,
                _ => false,
            }
    }

    fn is_negative_like(&self) -> bool {
        !self.num.is_zero() && self.num.lc().is_negative_like()
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{int, rat};

    type Q = RatFunc<Rational>;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn canonical_form() {
        let f = Q::new(p(&[0, 2]), p(&[0, 0, 4]));
        assert_eq!(f.num(), &p(&[1]).scale(&rat(1, 2)));
        assert_eq!(f.den(), &p(&[0, 1]));
        assert_eq!(f.render(), "(1/2)/(t)");
    }

    #[test]
    fn series_of_half_over_t() {
        let f = Q::new(p(&[1]), p(&[0, 2]));
        let s = f.series_at(&int(1), 2).unwrap();
        assert_eq!(s, vec![rat(1, 2), rat(-1, 2), rat(1, 2)]);
        assert!(f.series_at(&int(0), 2).is_none());
    }

    #[test]
    fn derivative_quotient_rule() {
        let f = Q::new(p(&[1, 1]), p(&[0, 1]));
        assert_eq!(f.derivative(), Q::new(p(&[-1]), p(&[0, 0, 1])));
    }
}
