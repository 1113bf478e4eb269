//! Buchberger's algorithm with the product and chain criteria.

use super::field::Field;
use super::multipoly::{mono_div, mono_divides, mono_lcm, Mono, MonoOrder, MultiPoly, Ring};
use super::AlgebraError;
use std::collections::BTreeSet;
use std::sync::Arc;

/// Hard limits on a Gröbner computation. Exceeding one is an error, never a truncation.
#[derive(Clone, Copy, Debug)]
pub struct GbConfig {
    pub max_degree: u32,
    pub max_basis: usize,
    pub max_reductions: usize,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig { max_degree: 40, max_basis: 2000, max_reductions: 200_000 }
    }
}

/// A list of generators; `is_groebner` marks a reduced Gröbner basis for the ring order.
#[derive(Clone)]
pub struct IdealBasis<F> {
    ring: Arc<Ring>,
    gens: Vec<MultiPoly<F>>,
    is_groebner: bool,
}

impl<F: Field> IdealBasis<F> {
    pub fn new(ring: &Arc<Ring>, gens: Vec<MultiPoly<F>>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).map(|g| g.embed(ring)).collect();
        IdealBasis { ring: ring.clone(), gens, is_groebner: false }
    }

    /// Wrap generators already known to form a Gröbner basis, e.g. the union of
    /// reduced bases in disjoint variable sets.
    pub fn assume_groebner(ring: &Arc<Ring>, gens: Vec<MultiPoly<F>>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).map(|g| g.embed(ring)).collect();
        IdealBasis { ring: ring.clone(), gens, is_groebner: true }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn gens(&self) -> &[MultiPoly<F>] {
        &self.gens
    }

    pub fn into_gens(self) -> Vec<MultiPoly<F>> {
        self.gens
    }

    pub fn is_groebner(&self) -> bool {
        self.is_groebner
    }

    pub fn order(&self) -> MonoOrder {
        self.ring.order()
    }

    /// The unit ideal.
    pub fn is_unit(&self) -> bool {
        self.is_groebner && self.gens.len() == 1 && self.gens[0].is_constant()
    }

    /// Normal form modulo the generators (complete reduction).
    pub fn reduce(&self, p: &MultiPoly<F>) -> MultiPoly<F> {
        normal_form(&p.embed(&self.ring), &self.gens)
    }

    /// Ideal membership; requires a Gröbner basis.
    pub fn contains(&self, p: &MultiPoly<F>) -> bool {
        assert!(self.is_groebner, "membership needs a Gröbner basis");
        self.reduce(p).is_zero()
    }

    /// Elements free of the first `k` variables; under `Block(k)` this is the elimination ideal.
    pub fn eliminate(&self, k: usize) -> Vec<MultiPoly<F>> {
        assert!(self.is_groebner && self.order() == MonoOrder::Block(k), "elimination needs a block Gröbner basis");
        self.gens.iter().filter(|g| g.support_vars().iter().all(|&v| v >= k)).cloned().collect()
    }

    /// Leading monomials; with a Gröbner basis they generate the initial ideal.
    pub fn leading_monomials(&self) -> Vec<Mono> {
        self.gens.iter().filter_map(|g| g.lm().cloned()).collect()
    }
}

impl<F: Field> std::fmt::Debug for IdealBasis<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdealBasis").field("gens", &self.gens).field("is_groebner", &self.is_groebner).finish()
    }
}

/// Complete reduction of `p` by `divisors`.
pub fn normal_form<F: Field>(p: &MultiPoly<F>, divisors: &[MultiPoly<F>]) -> MultiPoly<F> {
    let ring = p.ring().clone();
    let mut rem: Vec<(Mono, F)> = Vec::new();
    let mut cur = p.clone();
    while let Some(lm) = cur.lm().cloned() {
        let lc = cur.lc();
        match divisors.iter().find(|g| g.lm().is_some_and(|m| mono_divides(m, &lm))) {
            Some(g) => {
                let q = mono_div(&lm, g.lm().expect("nonzero divisor"));
                let a = lc / g.lc();
                cur = &cur - &g.mul_term(&q, &a);
            }
            None => {
                rem.push((lm, lc));
                cur = cur.drop_leading();
            }
        }
    }
    MultiPoly::from_terms(&ring, rem)
}

fn spoly<F: Field>(f: &MultiPoly<F>, g: &MultiPoly<F>) -> MultiPoly<F> {
    let (lf, lg) = (f.lm().expect("nonzero"), g.lm().expect("nonzero"));
    let l = mono_lcm(lf, lg);
    let a = f.mul_term(&mono_div(&l, lf), &f.lc().inv());
    let b = g.mul_term(&mono_div(&l, lg), &g.lc().inv());
    &a - &b
}

/// Reduced Gröbner basis of the ideal generated by `gens` in `ring`'s order.
pub fn groebner_basis<F: Field>(
    ring: &Arc<Ring>,
    gens: &[MultiPoly<F>],
    cfg: &GbConfig,
) -> Result<IdealBasis<F>, AlgebraError> {
    let mut basis: Vec<MultiPoly<F>> = Vec::new();
    for g in gens {
        let g = g.embed(ring);
        if g.is_zero() {
            continue;
        }
        if g.is_constant() {
            return Ok(IdealBasis { ring: ring.clone(), gens: vec![MultiPoly::one(ring)], is_groebner: true });
        }
        basis.push(g.monic());
    }
    if basis.is_empty() {
        return Ok(IdealBasis { ring: ring.clone(), gens: Vec::new(), is_groebner: true });
    }
    // pairs keyed by (lcm degree, j, i) for the normal selection strategy
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let lcm_deg = |b: &[MultiPoly<F>], i: usize, j: usize| -> u32 {
        mono_lcm(b[i].lm().expect("nonzero"), b[j].lm().expect("nonzero")).iter().sum()
    };
    for j in 1..basis.len() {
        for i in 0..j {
            pairs.insert((lcm_deg(&basis, i, j), j, i));
        }
    }
    let mut reductions = 0usize;
    while let Some(&(deg, j, i)) = pairs.iter().next() {
        pairs.remove(&(deg, j, i));
        let (li, lj) = (basis[i].lm().expect("nonzero").clone(), basis[j].lm().expect("nonzero").clone());
        if li.iter().zip(&lj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let l = mono_lcm(&li, &lj);
        let has_pair = |a: usize, b: usize| {
            let (hi, lo) = if a > b { (a, b) } else { (b, a) };
            pairs.contains(&(lcm_deg(&basis, lo, hi), hi, lo))
        };
        let chain = (0..basis.len()).any(|k| {
            k != i && k != j && mono_divides(basis[k].lm().expect("nonzero"), &l) && !has_pair(i, k) && !has_pair(j, k)
        });
        if chain {
            continue;
        }
        reductions += 1;
        if reductions > cfg.max_reductions {
            return Err(AlgebraError::ResourceCap(format!("more than {} S-polynomial reductions", cfg.max_reductions)));
        }
        let h = normal_form(&spoly(&basis[i], &basis[j]), &basis);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(IdealBasis { ring: ring.clone(), gens: vec![MultiPoly::one(ring)], is_groebner: true });
        }
        if h.degree() > cfg.max_degree {
            return Err(AlgebraError::ResourceCap(format!("basis element of degree {} exceeds {}", h.degree(), cfg.max_degree)));
        }
        if basis.len() >= cfg.max_basis {
            return Err(AlgebraError::ResourceCap(format!("basis size exceeds {}", cfg.max_basis)));
        }
        basis.push(h.monic());
        let n = basis.len() - 1;
        for k in 0..n {
            pairs.insert((lcm_deg(&basis, k, n), n, k));
        }
    }
    Ok(IdealBasis { ring: ring.clone(), gens: interreduce(basis), is_groebner: true })
}

fn interreduce<F: Field>(mut basis: Vec<MultiPoly<F>>) -> Vec<MultiPoly<F>> {
    basis.sort_by(|a, b| {
        let ord = a.ring().order();
        ord.cmp(a.lm().expect("nonzero"), b.lm().expect("nonzero"))
    });
    let mut minimal: Vec<MultiPoly<F>> = Vec::new();
    for g in basis {
        let lm = g.lm().expect("nonzero").clone();
        if !minimal.iter().any(|h| mono_divides(h.lm().expect("nonzero"), &lm)) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<_> = minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, g)| g.clone()).collect();
        let g = &minimal[k];
        let head = MultiPoly::from_terms(g.ring(), vec![(g.lm().expect("nonzero").clone(), F::one())]);
        let tail = g.monic().drop_leading();
        out.push(&head + &normal_form(&tail, &others));
    }
    debug_assert!(out.iter().all(|g| g.lc().is_one()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{int, Rational};
    use crate::algebra::multipoly::Var;

    fn ring(n: usize, order: MonoOrder) -> Arc<Ring> {
        Ring::new((0..n).map(Var::Y).collect(), order)
    }

    fn p(r: &Arc<Ring>, terms: &[(&[u32], i64)]) -> MultiPoly<Rational> {
        MultiPoly::from_terms(r, terms.iter().map(|(m, c)| (m.to_vec(), int(*c))).collect())
    }

    #[test]
    fn principal_gcd_like() {
        let r = ring(1, MonoOrder::Grevlex);
        let gb = groebner_basis(&r, &[p(&r, &[(&[2], 1), (&[0], -1)]), p(&r, &[(&[1], 1), (&[0], -1)])], &GbConfig::default()).unwrap();
        assert_eq!(gb.gens().len(), 1);
        assert_eq!(gb.gens()[0].render(), "y_1 - 1");
    }

    #[test]
    fn empty_ideal() {
        let r = ring(2, MonoOrder::Grevlex);
        let gb = groebner_basis::<Rational>(&r, &[], &GbConfig::default()).unwrap();
        assert!(gb.gens().is_empty());
    }

    #[test]
    fn eliminate_second_variable() {
        // variables ordered (y, x) so that y is eliminated by Block(1)
        let r = ring(2, MonoOrder::Block(1));
        let xy = p(&r, &[(&[1, 1], 1), (&[0, 0], -1)]);
        let yy = p(&r, &[(&[2, 0], 1), (&[0, 0], -1)]);
        let gb = groebner_basis(&r, &[xy, yy], &GbConfig::default()).unwrap();
        let elim = gb.eliminate(1);
        assert_eq!(elim.len(), 1);
        assert_eq!(elim[0].render(), "y_2^2 - 1");
    }

    #[test]
    fn cap_is_reported() {
        let r = ring(3, MonoOrder::Lex);
        let gens = [
            p(&r, &[(&[3, 0, 0], 1), (&[0, 1, 1], -1)]),
            p(&r, &[(&[0, 3, 0], 1), (&[1, 0, 1], -1)]),
            p(&r, &[(&[0, 0, 3], 1), (&[1, 1, 0], -1)]),
        ];
        let cfg = GbConfig { max_degree: 4, max_basis: 5, max_reductions: 10 };
        assert!(matches!(groebner_basis(&r, &gens, &cfg), Err(AlgebraError::ResourceCap(_))));
    }
}
