//! Simple algebraic extensions `F[y]/(m(y))` of a field.

use super::field::{Field, Rational};
use super::poly::Poly;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// Modulus and display name of the adjoined generator.
#[derive(Debug, PartialEq)]
pub struct ExtCtx<F> {
    pub modulus: Poly<F>,
    pub name: String,
}

/// Element of `F[y]/(m)` in power basis.
///
/// The context is optional so that `zero()` and `one()` exist without one;
/// binary operations take whichever context is present.
#[derive(Clone, Debug)]
pub struct SimpleExt<F> {
    ctx: Option<Arc<ExtCtx<F>>>,
    c: Poly<F>,
}

impl<F: Field> SimpleExt<F> {
    pub fn new_ctx(modulus: Poly<F>, name: &str) -> Arc<ExtCtx<F>> {
        assert!(modulus.lc().is_one(), "extension modulus must be monic");
        Arc::new(ExtCtx { modulus, name: name.to_string() })
    }

    pub fn from_base(a: F) -> Self {
        SimpleExt { ctx: None, c: Poly::constant(a) }
    }

    pub fn from_poly(ctx: &Arc<ExtCtx<F>>, p: Poly<F>) -> Self {
        SimpleExt { ctx: Some(ctx.clone()), c: p.rem(&ctx.modulus) }
    }

    pub fn generator(ctx: &Arc<ExtCtx<F>>) -> Self {
        Self::from_poly(ctx, Poly::x())
    }

    pub fn ctx(&self) -> Option<&Arc<ExtCtx<F>>> {
        self.ctx.as_ref()
    }

    /// Power-basis representative.
    pub fn lift(&self) -> &Poly<F> {
        &self.c
    }

    /// Power-basis coordinates padded to the extension degree.
    pub fn coords(&self, degree: usize) -> Vec<F> {
        (0..degree).map(|i| self.c.coeff(i)).collect()
    }

    pub fn in_base(&self) -> Option<F> {
        match self.c.degree() {
            None => Some(F::zero()),
            Some(0) => Some(self.c.coeff(0)),
            _ => None,
        }
    }

    fn join(a: &Option<Arc<ExtCtx<F>>>, b: &Option<Arc<ExtCtx<F>>>) -> Option<Arc<ExtCtx<F>>> {
        match (a, b) {
            (Some(x), Some(y)) => {
                debug_assert!(Arc::ptr_eq(x, y) || x.modulus == y.modulus, "mixed extension contexts");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    fn reduce(ctx: Option<Arc<ExtCtx<F>>>, p: Poly<F>) -> Self {
        match &ctx {
            Some(k) if p.degree().unwrap_or(0) >= k.modulus.deg_or_zero() => {
                let c = p.rem(&k.modulus);
                SimpleExt { ctx, c }
            }
            _ => SimpleExt { ctx, c: p },
        }
    }

    pub fn with_ctx(mut self, ctx: &Arc<ExtCtx<F>>) -> Self {
        self.ctx = Some(ctx.clone());
        self
    }
}

impl<F: Field> PartialEq for SimpleExt<F> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl<F: Field> Zero for SimpleExt<F> {
    fn zero() -> Self {
        SimpleExt { ctx: None, c: Poly::zero() }
    }
    fn is_zero(&self) -> bool {
        self.c.is_zero()
    }
}

impl<F: Field> One for SimpleExt<F> {
    fn one() -> Self {
        SimpleExt { ctx: None, c: Poly::one() }
    }
}

impl<F: Field> Add for SimpleExt<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        SimpleExt { ctx: Self::join(&self.ctx, &o.ctx), c: self.c + o.c }
    }
}

impl<F: Field> Sub for SimpleExt<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        SimpleExt { ctx: Self::join(&self.ctx, &o.ctx), c: self.c - o.c }
    }
}

impl<F: Field> Neg for SimpleExt<F> {
    type Output = Self;
    fn neg(self) -> Self {
        SimpleExt { ctx: self.ctx, c: -self.c }
    }
}

impl<F: Field> Mul for SimpleExt<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let ctx = Self::join(&self.ctx, &o.ctx);
        Self::reduce(ctx, self.c * o.c)
    }
}

impl<F: Field> Div for SimpleExt<F> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inv()
    }
}

impl<F: Field> Field for SimpleExt<F> {
    fn inv(&self) -> Self {
        assert!(!self.c.is_zero(), "inverse of zero");
        if let Some(a) = self.in_base() {
            return SimpleExt { ctx: self.ctx.clone(), c: Poly::constant(a.inv()) };
        }
        let k = self.ctx.as_ref().expect("non-constant element without context");
        let c = self.c.inv_mod(&k.modulus).expect("zero divisor in extension (modulus not irreducible)");
        SimpleExt { ctx: self.ctx.clone(), c }
    }

    fn from_rational(q: &Rational) -> Self {
        Self::from_base(F::from_rational(q))
    }

    fn as_rational(&self) -> Option<Rational> {
        self.in_base().and_then(|a| a.as_rational())
    }

    fn is_atomic(&self) -> bool {
        let mut nz = self.c.coeffs().iter().filter(|a| !a.is_zero());
        match (nz.next(), nz.next()) {
            (Some(a), None) => a.is_atomic(),
            (None, _) => true,
            _ => false,
        }
    }

    fn is_negative_like(&self) -> bool {
        !self.c.is_zero() && self.c.lc().is_negative_like()
    }
}

impl<F: Field> fmt::Display for SimpleExt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.ctx.as_ref().map(|k| k.name.as_str()).unwrap_or("g");
        f.write_str(&self.c.render(name))
    }
}
