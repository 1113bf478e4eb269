//! Solving zero-dimensional polynomial systems over a number field.

use super::factor::factor_over;
use super::groebner::{groebner_basis, GbConfig, IdealBasis};
use super::multipoly::{mono_divides, Mono, MonoOrder, MultiPoly, Ring};
use super::numfield::{Embedding, Nf, NumberField};
use super::poly::Poly;
use super::AlgebraError;
use num_traits::Zero;
use std::sync::Arc;

/// All solutions of a zero-dimensional system, in one common field.
#[derive(Clone, Debug)]
pub struct ZeroDimSolution {
    pub field: NumberField,
    /// Embedding of the input field into `field`.
    pub embedding: Embedding,
    /// Coordinates in the input ring's variable order.
    pub points: Vec<Vec<Nf>>,
    /// Number of standard monomials: the solution count with multiplicity.
    pub staircase_dim: usize,
}

impl ZeroDimSolution {
    /// Radical iff every solution is simple.
    pub fn is_radical(&self) -> bool {
        self.points.len() == self.staircase_dim
    }
}

/// Checks zero-dimensionality of a Gröbner basis and returns the number of standard monomials.
pub fn staircase_dim<F: super::field::Field>(gb: &IdealBasis<F>) -> Result<usize, AlgebraError> {
    assert!(gb.is_groebner());
    if gb.is_unit() {
        return Ok(0);
    }
    let ring = gb.ring();
    let lms = gb.leading_monomials();
    let mut bounds = vec![0u32; ring.nvars()];
    let mut free = Vec::new();
    for (k, b) in bounds.iter_mut().enumerate() {
        let pure = lms.iter().filter(|m| m.iter().enumerate().all(|(i, &e)| i == k || e == 0)).map(|m| m[k]).min();
        match pure {
            Some(e) => *b = e,
            None => free.push(ring.vars()[k].to_string()),
        }
    }
    if !free.is_empty() {
        return Err(AlgebraError::PositiveDimensional { free_vars: free });
    }
    let mut count = 0usize;
    let mut cur: Mono = vec![0; bounds.len()];
    loop {
        if !lms.iter().any(|m| mono_divides(m, &cur)) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == cur.len() {
                return Ok(count);
            }
            cur[k] += 1;
            if cur[k] < bounds[k] {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

struct Solver {
    field: NumberField,
    embedding: Embedding,
    ring: Arc<Ring>,
    cfg: GbConfig,
    tasks: Vec<Vec<MultiPoly<Nf>>>,
    points: Vec<Vec<Nf>>,
}

impl Solver {
    fn extend(&mut self, emb: &Embedding) {
        if emb.is_identity() {
            return;
        }
        let apply = |p: &MultiPoly<Nf>| p.map(|c| emb.apply(c));
        self.tasks = self.tasks.iter().map(|t| t.iter().map(apply).collect()).collect();
        self.points = self.points.iter().map(|pt| pt.iter().map(|c| emb.apply(c)).collect()).collect();
        self.embedding = self.embedding.then(emb);
        self.field = emb.target.clone();
    }

    fn run(&mut self) -> Result<(), AlgebraError> {
        while let Some(gens) = self.tasks.pop() {
            let gb = groebner_basis(&self.ring, &gens, &self.cfg)?;
            if gb.is_unit() {
                continue;
            }
            staircase_dim(&gb)?;
            let n = self.ring.nvars();
            let mut values: Vec<Option<Nf>> = vec![None; n];
            let mut branched = false;
            for k in (0..n).rev() {
                let uni = gb
                    .gens()
                    .iter()
                    .find(|g| g.support_vars() == [k])
                    .expect("reduced lex basis of a zero-dimensional ideal is triangular");
                let up = univariate(uni, k);
                if up.degree() == Some(1) {
                    let up = up.monic();
                    values[k] = Some(-up.coeff(0));
                    continue;
                }
                let factors = factor_over(&self.field, &up);
                if factors.len() == 1 && factors[0].1 == 1 {
                    // irreducible of degree >= 2: adjoin a root and revisit this system
                    let adj = self.field.adjoin(&factors[0].0)?;
                    self.tasks.push(gb.into_gens());
                    self.extend(&adj.embedding);
                } else {
                    for (f, _) in factors.into_iter().rev() {
                        let mut task = gb.gens().to_vec();
                        task.push(lift_univariate(&self.ring, &f, k));
                        self.tasks.push(task);
                    }
                }
                branched = true;
                break;
            }
            if !branched {
                self.points.push(values.into_iter().map(|v| v.expect("all coordinates fixed")).collect());
            }
        }
        Ok(())
    }
}

fn univariate(p: &MultiPoly<Nf>, k: usize) -> Poly<Nf> {
    let mut c = vec![Nf::zero(); p.degree_in(k) as usize + 1];
    for (m, a) in p.terms() {
        c[m[k] as usize] = a.clone();
    }
    Poly::new(c)
}

fn lift_univariate(ring: &Arc<Ring>, f: &Poly<Nf>, k: usize) -> MultiPoly<Nf> {
    let terms = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(e, a)| {
            let mut m = vec![0; ring.nvars()];
            m[k] = e as u32;
            (m, a.clone())
        })
        .collect();
    MultiPoly::from_terms(ring, terms)
}

/// All points of a zero-dimensional ideal, over the smallest field found by splitting.
pub fn solve_zero_dimensional(
    field: &NumberField,
    gens: &[MultiPoly<Nf>],
    cfg: &GbConfig,
) -> Result<ZeroDimSolution, AlgebraError> {
    let Some(first) = gens.first() else {
        return Err(AlgebraError::PositiveDimensional { free_vars: vec!["(no generators)".into()] });
    };
    let base_ring = first.ring().clone();
    let grevlex = base_ring.with_order(MonoOrder::Grevlex);
    let gb = groebner_basis(&grevlex, gens, cfg)?;
    let dim = staircase_dim(&gb)?;
    let lex = base_ring.with_order(MonoOrder::Lex);
    let mut solver = Solver {
        field: field.clone(),
        embedding: field.identity_embedding(),
        ring: lex.clone(),
        cfg: *cfg,
        tasks: vec![gb.gens().iter().map(|g| g.embed(&lex)).collect()],
        points: Vec::new(),
    };
    if dim > 0 {
        solver.run()?;
    }
    let mut points = solver.points;
    points.sort_by_key(|p| p.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    debug_assert!(points.iter().all(|pt| gens.iter().all(|g| g.map(|c| solver.embedding.apply(c)).eval(pt).is_zero())));
    Ok(ZeroDimSolution { field: solver.field, embedding: solver.embedding, points, staircase_dim: dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::multipoly::Var;
    use crate::algebra::field::Field;

    fn y_ring(n: usize) -> Arc<Ring> {
        Ring::new((0..n).map(Var::Y).collect(), MonoOrder::Grevlex)
    }

    fn p(r: &Arc<Ring>, terms: &[(&[u32], i64)]) -> MultiPoly<Nf> {
        MultiPoly::from_terms(r, terms.iter().map(|(m, c)| (m.to_vec(), Nf::from_i64(*c))).collect())
    }

    #[test]
    fn two_rational_points() {
        let r = y_ring(1);
        let s = solve_zero_dimensional(&NumberField::rationals(), &[p(&r, &[(&[2], 1), (&[0], -1)])], &GbConfig::default()).unwrap();
        assert_eq!(s.points.len(), 2);
        assert!(s.is_radical());
    }

    #[test]
    fn adjoins_i() {
        let r = y_ring(1);
        let s = solve_zero_dimensional(&NumberField::rationals(), &[p(&r, &[(&[2], 1), (&[0], 1)])], &GbConfig::default()).unwrap();
        assert_eq!(s.field.degree(), 2);
        assert_eq!(s.points.len(), 2);
        for pt in &s.points {
            assert_eq!(pt[0].clone() * pt[0].clone(), Nf::from_i64(-1));
        }
    }

    #[test]
    fn multiplicity_is_reported() {
        let r = y_ring(1);
        let s = solve_zero_dimensional(&NumberField::rationals(), &[p(&r, &[(&[2], 1), (&[1], -2), (&[0], 1)])], &GbConfig::default()).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.staircase_dim, 2);
        assert!(!s.is_radical());
    }

    #[test]
    fn positive_dimensional_rejected() {
        let r = y_ring(2);
        let e = solve_zero_dimensional(&NumberField::rationals(), &[p(&r, &[(&[1, 1], 1), (&[0, 0], -1)])], &GbConfig::default());
        assert!(matches!(e, Err(AlgebraError::PositiveDimensional { .. })));
    }

    #[test]
    fn circle_meets_line() {
        // y1^2 + y2^2 = 1, y1 = y2  ->  y1 = y2 = +-1/sqrt2
        let r = y_ring(2);
        let s = solve_zero_dimensional(
            &NumberField::rationals(),
            &[p(&r, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -1)]), p(&r, &[(&[1, 0], 1), (&[0, 1], -1)])],
            &GbConfig::default(),
        )
        .unwrap();
        assert_eq!(s.points.len(), 2);
        assert_eq!(s.field.degree(), 2);
    }
}
