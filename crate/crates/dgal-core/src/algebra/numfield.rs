//! Number fields `Q[g]/(m(g))`, enlarged on demand by primitive-element absorption.

use super::ext::{ExtCtx, SimpleExt};
use super::factor::{factor_rational, norm_poly, shifts};
use super::field::{Field, Rational};
use super::linalg::Matrix;
use super::poly::Poly;
use super::AlgebraError;
use num_traits::{One, Zero};
use std::sync::Arc;

/// Element of the current constant field.
pub type Nf = SimpleExt<Rational>;

/// Printed name of the field generator.
pub const GEN_NAME: &str = "g";

/// The constant field: either Q or `Q[g]/(m)` with `m` monic irreducible.
#[derive(Clone, Debug)]
pub struct NumberField {
    ctx: Option<Arc<ExtCtx<Rational>>>,
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        self.minpoly() == o.minpoly()
    }
}

/// An embedding `K -> L`, given by the image of the generator of `K`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: NumberField,
    pub target: NumberField,
    gen_image: Nf,
}

/// Result of [`NumberField::adjoin`].
#[derive(Clone, Debug)]
pub struct Adjoined {
    pub field: NumberField,
    pub embedding: Embedding,
    /// A root of the adjoined polynomial, in the new field.
    pub root: Nf,
}

impl NumberField {
    pub fn rationals() -> Self {
        NumberField { ctx: None }
    }

    /// `Q[g]/(m)`; `m` must be monic and irreducible over Q.
    pub fn from_minpoly(m: &Poly<Rational>) -> Result<Self, AlgebraError> {
        if m.is_zero() || !m.lc().is_one() {
            return Err(AlgebraError::NotMonic(m.render(GEN_NAME)));
        }
        if m.degree() == Some(1) {
            return Ok(Self::rationals());
        }
        let fs = factor_rational(m);
        if fs.len() != 1 || fs[0].1 != 1 {
            return Err(AlgebraError::Reducible { poly: m.render(GEN_NAME), factor: fs[0].0.render(GEN_NAME) });
        }
        Ok(NumberField { ctx: Some(Nf::new_ctx(m.clone(), GEN_NAME)) })
    }

    pub fn degree(&self) -> usize {
        self.ctx.as_ref().map_or(1, |k| k.modulus.deg_or_zero())
    }

    pub fn is_rationals(&self) -> bool {
        self.ctx.is_none()
    }

    pub fn minpoly(&self) -> Poly<Rational> {
        match &self.ctx {
            Some(k) => k.modulus.clone(),
            None => Poly::x(),
        }
    }

    pub fn generator(&self) -> Nf {
        match &self.ctx {
            Some(k) => Nf::generator(k),
            None => Nf::zero(),
        }
    }

    pub fn gen_power(&self, a: usize) -> Nf {
        match &self.ctx {
            Some(k) => Nf::from_poly(k, Poly::monomial(Rational::one(), a)),
            None => Nf::one(),
        }
    }

    pub fn from_rational(&self, q: Rational) -> Nf {
        self.attach(Nf::from_base(q))
    }

    pub fn from_coords(&self, c: Vec<Rational>) -> Nf {
        match &self.ctx {
            Some(k) => Nf::from_poly(k, Poly::new(c)),
            None => Nf::from_base(c.into_iter().next().unwrap_or_else(Rational::zero)),
        }
    }

    /// Power-basis coordinates (length = degree).
    pub fn coords(&self, a: &Nf) -> Vec<Rational> {
        a.coords(self.degree())
    }

    /// Tag an element with this field's context.
    pub fn attach(&self, a: Nf) -> Nf {
        match &self.ctx {
            Some(k) => a.with_ctx(k),
            None => a,
        }
    }

    pub fn identity_embedding(&self) -> Embedding {
        Embedding { source: self.clone(), target: self.clone(), gen_image: self.generator() }
    }

    /// Adjoin a root of `m` (monic, irreducible over this field).
    ///
    /// The result is again a simple extension of Q: a primitive element
    /// `x + s*g` is found whose norm is squarefree, which also certifies
    /// irreducibility (Trager).
    pub fn adjoin(&self, m: &Poly<Nf>) -> Result<Adjoined, AlgebraError> {
        let Some(deg) = m.degree() else {
            return Err(AlgebraError::NotMonic("0".into()));
        };
        if !m.lc().is_one() {
            return Err(AlgebraError::NotMonic(m.render("x")));
        }
        if deg == 1 {
            return Ok(Adjoined { field: self.clone(), embedding: self.identity_embedding(), root: -m.coeff(0) });
        }
        if !m.is_squarefree() {
            let g = Poly::gcd(m, &m.derivative());
            return Err(AlgebraError::Reducible { poly: m.render("x"), factor: g.render("x") });
        }
        let dk = self.degree();
        if dk == 1 {
            let mq = m.map(|c| c.as_rational().expect("rational coefficient"));
            let field = Self::from_minpoly(&mq)?;
            let root = field.generator();
            let embedding = Embedding { source: self.clone(), target: field.clone(), gen_image: Nf::zero() };
            return Ok(Adjoined { field, embedding, root });
        }
        let theta = self.generator();
        for s in shifts() {
            let sh = Nf::from_i64(s) * theta.clone();
            let ms = m.compose(&Poly::new(vec![-sh.clone(), Nf::one()]));
            let nrm = norm_poly(self, &ms);
            if !nrm.is_squarefree() {
                continue;
            }
            let fs = factor_rational(&nrm);
            if fs.len() > 1 {
                let w = fs[0].0.map(Nf::from_rational);
                let h = Poly::gcd(&ms, &w).compose(&Poly::new(vec![sh, Nf::one()]));
                return Err(AlgebraError::Reducible { poly: m.render("x"), factor: h.render("x") });
            }
            let field = NumberField { ctx: Some(Nf::new_ctx(nrm.clone(), GEN_NAME)) };
            // Coordinates in the Q-basis theta^a x^b of L = K[x]/(m) for powers of beta = x + s*theta.
            let dim = dk * deg;
            let reduce = |p: &Poly<Nf>| p.rem(m);
            let beta = Poly::new(vec![Nf::from_i64(s) * theta.clone(), Nf::one()]);
            let coords_of = |p: &Poly<Nf>| -> Vec<Rational> {
                let mut v = vec![Rational::zero(); dim];
                for b in 0..deg {
                    for (a, q) in self.coords(&p.coeff(b)).into_iter().enumerate() {
                        v[b * dk + a] = q;
                    }
                }
                v
            };
            let mut cols = Vec::with_capacity(dim);
            let mut pw = Poly::<Nf>::one();
            for _ in 0..dim {
                cols.push(coords_of(&pw));
                pw = reduce(&(pw * beta.clone()));
            }
            let basis = Matrix::from_rows(cols).transpose();
            let theta_coords = coords_of(&Poly::constant(theta.clone()));
            let lam = basis.solve(&theta_coords).expect("primitive element spans the extension");
            let gen_image = field.from_coords(lam);
            let root = field.generator() - Nf::from_i64(s) * gen_image.clone();
            let embedding = Embedding { source: self.clone(), target: field.clone(), gen_image };
            return Ok(Adjoined { field, embedding, root });
        }
        unreachable!("shift search is unbounded")
    }
}

impl Embedding {
    pub fn apply(&self, a: &Nf) -> Nf {
        if let Some(q) = a.as_rational() {
            return self.target.from_rational(q);
        }
        let mut acc = Nf::zero();
        for c in a.lift().coeffs().iter().rev() {
            acc = acc * self.gen_image.clone() + Nf::from_base(c.clone());
        }
        self.target.attach(acc)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Embedding) -> Embedding {
        Embedding { source: self.source.clone(), target: next.target.clone(), gen_image: next.apply(&self.gen_image) }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }

    pub fn apply_poly(&self, p: &Poly<Nf>) -> Poly<Nf> {
        p.map(|c| self.apply(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;

    fn qx(c: &[i64]) -> Poly<Nf> {
        Poly::new(c.iter().map(|&x| Nf::from_i64(x)).collect())
    }

    #[test]
    fn adjoin_i() {
        let q = NumberField::rationals();
        let a = q.adjoin(&qx(&[1, 0, 1])).unwrap();
        assert_eq!(a.field.degree(), 2);
        assert_eq!(a.root.clone() * a.root.clone(), Nf::from_i64(-1));
    }

    #[test]
    fn adjoin_degree_one_is_identity() {
        let q = NumberField::rationals();
        let a = q.adjoin(&qx(&[-2, 1])).unwrap();
        assert_eq!(a.field.degree(), 1);
        assert_eq!(a.root, Nf::from_i64(2));
    }

    #[test]
    fn sqrt2_then_sqrt3() {
        let q = NumberField::rationals();
        let a = q.adjoin(&qx(&[-2, 0, 1])).unwrap();
        let b = a.field.adjoin(&qx(&[-3, 0, 1])).unwrap();
        assert_eq!(b.field.degree(), 4);
        let s2 = b.embedding.apply(&a.root);
        let s3 = b.root.clone();
        assert_eq!(s2.clone() * s2.clone(), Nf::from_i64(2));
        assert_eq!(s3.clone() * s3.clone(), Nf::from_i64(3));
        let s6 = s2 * s3;
        assert_eq!(s6.clone() * s6, Nf::from_i64(6));
    }

    #[test]
    fn reducible_rejected_with_witness() {
        let q = NumberField::rationals();
        let a = q.adjoin(&qx(&[-2, 0, 1])).unwrap();
        // x^2 - 8 = (x - 2 sqrt2)(x + 2 sqrt2) over Q(sqrt2)
        match a.field.adjoin(&qx(&[-8, 0, 1])) {
            Err(AlgebraError::Reducible { factor, .. }) => assert!(factor.contains('x')),
            other => panic!("expected reducible, got {other:?}"),
        }
        assert!(NumberField::from_minpoly(&Poly::new(vec![int(-1), int(0), int(1)])).is_err());
    }
}
