//! Degree-bounded polynomial relations among the entries of a fundamental matrix.
//!
//! The unknown relation `P = sum_{i,m} c_{i,m} (t-a)^i m(X)` runs over monomials
//! `m` of degree `<= d` and `i <= 2 ell`; vanishing of the first `N + 2` series
//! coefficients of `P(Γ_a)` is a linear system in the `c_{i,m}`.

use crate::algebra::ext::{ExtCtx, SimpleExt};
use crate::algebra::factor::roots_in;
use crate::algebra::linalg::{EchelonBasis, Matrix};
use crate::algebra::multipoly::{monomials_upto, Mono, MultiPoly, Ring};
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::RatFunc;
use crate::ode::{companion_of_minpoly, series_mul, OdeSystem, TruncSeries};
use crate::{AlgebraError, CMatrix, DgalError, Field, KMultiPoly, KPoly, KRat, Nf, NumberField, Result};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Arc;

/// `k(γ)` for an algebraic function `γ`; printed as the auxiliary variable `y_1`.
pub type KAlg = SimpleExt<KRat>;

/// Name under which the adjoined algebraic function prints.
pub const ALG_NAME: &str = "y_1";

/// How the truncation order `N` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderStrategy {
    /// Use exactly this `N`; the result is marked rigorous.
    Explicit(usize),
    /// Smallest `M` whose kernel survives `window` further orders; `None` picks `25 + d n^2`.
    Stabilize { window: Option<usize> },
}

impl Default for OrderStrategy {
    fn default() -> Self {
        OrderStrategy::Stabilize { window: None }
    }
}

/// Outcome of [`order_bound`]-style searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderBound {
    pub order: usize,
    pub rigorous: bool,
}

/// Parameters of a relation computation.
#[derive(Clone, Copy, Debug)]
pub struct RelationConfig {
    pub degree: u32,
    /// Coefficients are polynomials in `t - a` of degree `<= 2 * coeff_degree`.
    pub coeff_degree: usize,
    pub strategy: OrderStrategy,
    /// Give up (resource cap) beyond this many series terms.
    pub max_order: usize,
}

impl RelationConfig {
    pub fn new(degree: u32) -> Self {
        RelationConfig { degree, coeff_degree: 1, strategy: OrderStrategy::default(), max_order: 1500 }
    }

    pub fn with_coeff_degree(mut self, ell: usize) -> Self {
        self.coeff_degree = ell;
        self
    }

    pub fn with_strategy(mut self, s: OrderStrategy) -> Self {
        self.strategy = s;
        self
    }

    fn window(&self, n: usize) -> usize {
        match self.strategy {
            OrderStrategy::Stabilize { window: Some(w) } => w,
            _ => 25 + self.degree as usize * n * n,
        }
    }
}

/// A basis of the degree-`<= d` relations, in reduced echelon form over the
/// coefficient field with respect to the ring's monomial order.
#[derive(Clone, Debug)]
pub struct RelationIdeal<C: Field> {
    pub n: usize,
    pub degree: u32,
    pub coeff_degree: usize,
    pub point: Nf,
    pub field: NumberField,
    pub bound: OrderBound,
    pub ring: Arc<Ring>,
    pub basis: Vec<MultiPoly<C>>,
}

/// Relations over `k(γ)`, together with the branch of `γ` used at the base point.
#[derive(Clone, Debug)]
pub struct AlgebraicRelations {
    pub ideal: RelationIdeal<KAlg>,
    pub minpoly: Poly<KRat>,
    /// Value of `γ` at the base point.
    pub branch: Nf,
    /// Series of `γ` at the base point, through the truncation order.
    pub gamma_series: Vec<Nf>,
}

impl<C: Field> RelationIdeal<C> {
    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn render(&self) -> Vec<String> {
        self.basis.iter().map(|p| p.render()).collect()
    }

    /// Pivot (leading) monomial of each basis element.
    pub fn pivots(&self) -> Vec<Mono> {
        self.basis.iter().map(|p| p.lm().expect("nonzero relation").clone()).collect()
    }
}

/// Series of monomials in the entries of a matrix series, memoized.
pub struct MonomialSeries<'a> {
    entries: Vec<Vec<Nf>>,
    len: usize,
    cache: HashMap<Mono, Vec<Nf>>,
    _g: std::marker::PhantomData<&'a ()>,
}

impl<'a> MonomialSeries<'a> {
    /// Entries in row-major order, matching [`Ring::matrix`].
    pub fn new(gamma: &TruncSeries, len: usize) -> Self {
        let (r, c) = (gamma.nrows(), gamma.ncols());
        let entries = (0..r).flat_map(|i| (0..c).map(move |j| (i, j))).map(|(i, j)| gamma.entry(i, j)).collect();
        MonomialSeries { entries, len, cache: HashMap::new(), _g: std::marker::PhantomData }
    }

    pub fn get(&mut self, m: &[u32]) -> Vec<Nf> {
        if let Some(s) = self.cache.get(m) {
            return s.clone();
        }
        let s = match m.iter().position(|&e| e > 0) {
            None => {
                let mut one = vec![Nf::zero(); self.len];
                one[0] = Nf::one();
                one
            }
            Some(k) => {
                let mut rest = m.to_vec();
                rest[k] -= 1;
                let r = self.get(&rest);
                series_mul(&r, &self.entries[k], self.len)
            }
        };
        self.cache.insert(m.to_vec(), s.clone());
        s
    }
}

/// Series at `a` of `P(Γ)` for `P` with coefficients in `k`.
pub fn poly_series(p: &KMultiPoly, gamma: &TruncSeries, len: usize) -> Vec<Nf> {
    let mut ms = MonomialSeries::new(gamma, len);
    let mut acc = vec![Nf::zero(); len];
    for (m, c) in p.terms() {
        let cs = c.series_at(&gamma.point, len - 1).expect("coefficient regular at the base point");
        let prod = series_mul(&cs, &ms.get(m), len);
        acc.iter_mut().zip(prod).for_each(|(a, b)| *a = a.clone() + b);
    }
    acc
}

/// Series of `P(Γ)` for `P` over `k(γ)`, given the series of `γ`.
pub fn alg_poly_series(p: &MultiPoly<KAlg>, gamma: &TruncSeries, gamma_series: &[Nf], len: usize) -> Vec<Nf> {
    let mut ms = MonomialSeries::new(gamma, len);
    let mut acc = vec![Nf::zero(); len];
    for (m, c) in p.terms() {
        let mut cs = vec![Nf::zero(); len];
        let mut gpow = {
            let mut one = vec![Nf::zero(); len];
            one[0] = Nf::one();
            one
        };
        for coef in c.lift().coeffs() {
            let s = coef.series_at(&gamma.point, len - 1).expect("coefficient regular at the base point");
            let term = series_mul(&s, &gpow, len);
            cs.iter_mut().zip(term).for_each(|(a, b)| *a = a.clone() + b);
            gpow = series_mul(&gpow, gamma_series, len);
        }
        let prod = series_mul(&cs, &ms.get(m), len);
        acc.iter_mut().zip(prod).for_each(|(a, b)| *a = a.clone() + b);
    }
    acc
}

/// Does `P(Γ)` vanish through `(t-a)^order`?
pub fn membership_test(p: &KMultiPoly, gamma: &TruncSeries, order: usize) -> bool {
    assert!(order <= gamma.order(), "series too short for the requested order");
    poly_series(p, gamma, order + 1).iter().all(|c| c.is_zero())
}

/// Column data: for each unknown, its series.
struct Ansatz {
    /// `(i, j, monomial index)`: power of `(t-a)`, power of `γ`, monomial.
    cols: Vec<(usize, usize, usize)>,
    monos: Vec<Mono>,
}

impl Ansatz {
    fn new(nvars: usize, d: u32, ell: usize, gamma_deg: usize) -> Self {
        let ring = Ring::matrix((nvars as f64).sqrt() as usize);
        let mut monos = monomials_upto(nvars, d);
        // descending ring order, so echelon pivots are leading monomials
        monos.sort_by(|a, b| ring.order().cmp(b, a));
        let mut cols = Vec::new();
        for mi in 0..monos.len() {
            for j in 0..gamma_deg {
                for i in 0..=2 * ell {
                    cols.push((i, j, mi));
                }
            }
        }
        Ansatz { cols, monos }
    }
}

/// Everything needed to produce ansatz rows at growing orders.
struct RowSource<'s> {
    sys: &'s OdeSystem,
    point: Nf,
    gamma_init: Option<(OdeSystem, CMatrix)>,
}

impl RowSource<'_> {
    /// Column series of length `len`: `(t-a)^i γ^j m(Γ)`.
    fn columns(&self, ansatz: &Ansatz, len: usize) -> Result<(Vec<Vec<Nf>>, TruncSeries, Vec<Nf>)> {
        let gamma = self.sys.fundamental_series(&self.point, len - 1)?;
        let gseries = match &self.gamma_init {
            Some((b, w0)) => b.solution_series(&self.point, len - 1, w0.clone())?.entry(1.min(b.n() - 1), 0),
            None => Vec::new(),
        };
        let mut ms = MonomialSeries::new(&gamma, len);
        let mut gpows: Vec<Vec<Nf>> = vec![{
            let mut one = vec![Nf::zero(); len];
            one[0] = Nf::one();
            one
        }];
        let gdeg = ansatz.cols.iter().map(|c| c.1).max().unwrap_or(0);
        for _ in 0..gdeg {
            let last = gpows.last().expect("nonempty");
            gpows.push(series_mul(last, &gseries, len));
        }
        let mut base: HashMap<(usize, usize), Vec<Nf>> = HashMap::new();
        let mut out = Vec::with_capacity(ansatz.cols.len());
        for &(i, j, mi) in &ansatz.cols {
            let s = base
                .entry((j, mi))
                .or_insert_with(|| series_mul(&gpows[j], &ms.get(&ansatz.monos[mi]), len))
                .clone();
            let mut shifted = vec![Nf::zero(); len];
            shifted[i..].clone_from_slice(&s[..len - i]);
            out.push(shifted);
        }
        Ok((out, gamma, gseries))
    }
}

struct Solved {
    kernel: Vec<Vec<Nf>>,
    bound: OrderBound,
    gamma_series: Vec<Nf>,
}

fn solve_ansatz(src: &RowSource, ansatz: &Ansatz, cfg: &RelationConfig, n: usize) -> Result<Solved> {
    let ncols = ansatz.cols.len();
    let mut eb = EchelonBasis::<Nf>::new(ncols);
    match cfg.strategy {
        OrderStrategy::Explicit(big_n) => {
            let (cols, _, gs) = src.columns(ansatz, big_n + 2)?;
            for k in 0..big_n + 2 {
                eb.insert(cols.iter().map(|c| c[k].clone()).collect());
            }
            Ok(Solved { kernel: eb.kernel(), bound: OrderBound { order: big_n, rigorous: true }, gamma_series: gs })
        }
        OrderStrategy::Stabilize { .. } => {
            let w = cfg.window(n);
            let mut len = ncols + w + 8;
            let mut next_row = 0;
            // row index of the last rank increase
            let mut last_inc: Option<usize> = None;
            loop {
                if len > cfg.max_order + 2 {
                    return Err(AlgebraError::ResourceCap(format!(
                        "relation kernel did not stabilize within {} series terms",
                        cfg.max_order
                    ))
                    .into());
                }
                let (cols, _, gs) = src.columns(ansatz, len)?;
                while next_row < len {
                    if eb.insert(cols.iter().map(|c| c[next_row].clone()).collect()) {
                        last_inc = Some(next_row);
                    }
                    next_row += 1;
                    let m = last_inc.map_or(0, |p| p.saturating_sub(1));
                    if next_row > m + w + 1 || eb.rank() == ncols {
                        return Ok(Solved {
                            kernel: eb.kernel(),
                            bound: OrderBound { order: m, rigorous: false },
                            gamma_series: gs,
                        });
                    }
                }
                len *= 2;
            }
        }
    }
}

/// Determine `N` for the given strategy (runs the linear solve when stabilizing).
pub fn order_bound(sys: &OdeSystem, point: &Nf, cfg: &RelationConfig) -> Result<OrderBound> {
    if let OrderStrategy::Explicit(n) = cfg.strategy {
        return Ok(OrderBound { order: n, rigorous: true });
    }
    let n = sys.n();
    let ansatz = Ansatz::new(n * n, cfg.degree, cfg.coeff_degree, 1);
    let src = RowSource { sys, point: point.clone(), gamma_init: None };
    Ok(solve_ansatz(&src, &ansatz, cfg, n)?.bound)
}

/// Coefficient polynomial `sum_i c_i (t-a)^i` as an element of `k`.
fn shifted_poly(coeffs: &[Nf], point: &Nf) -> KRat {
    let p = KPoly::new(coeffs.to_vec()).taylor_shift(&-point.clone());
    RatFunc::from_poly(p)
}

/// Reduced echelon form of polynomial rows over a field, columns in descending monomial order.
fn echelon_polys<C: Field>(ring: &Arc<Ring>, monos: &[Mono], rows: Vec<Vec<C>>) -> Vec<MultiPoly<C>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(rows).rref();
    (0..pivots.len())
        .map(|k| MultiPoly::from_terms(ring, monos.iter().cloned().zip(r.row(k).iter().cloned()).collect()))
        .collect()
}

/// `I_{F,d}` for the fundamental matrix normalized at `point`.
pub fn relation_ideal(sys: &OdeSystem, point: &Nf, cfg: &RelationConfig) -> Result<RelationIdeal<KRat>> {
    sys.check_regular(point)?;
    let n = sys.n();
    let ansatz = Ansatz::new(n * n, cfg.degree, cfg.coeff_degree, 1);
    let src = RowSource { sys, point: point.clone(), gamma_init: None };
    let solved = solve_ansatz(&src, &ansatz, cfg, n)?;
    let nm = ansatz.monos.len();
    let width = 2 * cfg.coeff_degree + 1;
    let rows: Vec<Vec<KRat>> = solved
        .kernel
        .iter()
        .map(|v| (0..nm).map(|mi| shifted_poly(&v[mi * width..(mi + 1) * width], point)).collect())
        .collect();
    let ring = Ring::matrix(n);
    let basis = echelon_polys(&ring, &ansatz.monos, rows);
    Ok(RelationIdeal {
        n,
        degree: cfg.degree,
        coeff_degree: cfg.coeff_degree,
        point: point.clone(),
        field: sys.field().clone(),
        bound: solved.bound,
        ring,
        basis,
    })
}

/// Relations over `k(γ)` where `Q(γ) = 0`, `Q` monic squarefree over `k`.
///
/// The branch of `γ` at `point` is a root of `Q(point, x)`; the constant field is
/// enlarged if no root exists there. Nonnegative rational branches are preferred.
pub fn relation_ideal_algebraic(
    sys: &OdeSystem,
    point: &Nf,
    cfg: &RelationConfig,
    minpoly: &Poly<KRat>,
) -> Result<AlgebraicRelations> {
    sys.check_regular(point)?;
    let l = minpoly.degree().ok_or_else(|| DgalError::Invalid("zero minimal polynomial".into()))?;
    let comp = companion_of_minpoly(sys.field(), minpoly)?;
    comp.check_regular(point).map_err(|_| DgalError::Invalid(format!("γ is singular at t = {point}")))?;
    let at_point = minpoly.map(|c| c.eval(point).expect("regular coefficient"));
    if !at_point.is_squarefree() {
        return Err(DgalError::Invalid(format!("γ is ramified at t = {point}")));
    }
    let mut field = sys.field().clone();
    let mut sys = sys.clone();
    let mut comp = comp;
    let mut point = point.clone();
    let mut minpoly = minpoly.clone();
    let mut at_point = at_point;
    let mut roots = roots_in(&field, &at_point);
    if roots.is_empty() {
        let f = crate::algebra::factor::factor_over(&field, &at_point).remove(0).0;
        let adj = field.adjoin(&f)?;
        let emb = adj.embedding.clone();
        sys = sys.extend(&emb);
        comp = comp.extend(&emb);
        point = emb.apply(&point);
        minpoly = minpoly.map(|c| c.map(|x| emb.apply(x)));
        at_point = at_point.map(|c| emb.apply(c));
        field = adj.field;
        roots = roots_in(&field, &at_point);
    }
    roots.sort_by_key(|r| (r.is_negative_like(), r.as_rational().is_none(), r.to_string()));
    let branch = roots[0].clone();
    let w0 = CMatrix::from_fn(l, 1, |i, _| branch.pow(i as u64));
    let n = sys.n();
    let ansatz = Ansatz::new(n * n, cfg.degree, cfg.coeff_degree, l);
    let src = RowSource { sys: &sys, point: point.clone(), gamma_init: Some((comp, w0)) };
    let solved = solve_ansatz(&src, &ansatz, cfg, n)?;
    let ctx: Arc<ExtCtx<KRat>> = KAlg::new_ctx(minpoly.clone(), ALG_NAME);
    let width = 2 * cfg.coeff_degree + 1;
    let nm = ansatz.monos.len();
    let rows: Vec<Vec<KAlg>> = solved
        .kernel
        .iter()
        .map(|v| {
            (0..nm)
                .map(|mi| {
                    let block = &v[mi * l * width..(mi + 1) * l * width];
                    let coeffs: Vec<KRat> = (0..l).map(|j| shifted_poly(&block[j * width..(j + 1) * width], &point)).collect();
                    KAlg::from_poly(&ctx, Poly::new(coeffs))
                })
                .collect()
        })
        .collect();
    let ring = Ring::matrix(n);
    let basis = echelon_polys(&ring, &ansatz.monos, rows);
    let gamma_series = if l == 1 { Vec::new() } else { solved.gamma_series };
    Ok(AlgebraicRelations {
        ideal: RelationIdeal {
            n,
            degree: cfg.degree,
            coeff_degree: cfg.coeff_degree,
            point: point.clone(),
            field,
            bound: solved.bound,
            ring,
            basis,
        },
        minpoly,
        branch,
        gamma_series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> NumberField {
        NumberField::rationals()
    }

    #[test]
    fn sqrt_t_relation() {
        let s = OdeSystem::from_strings(&q(), &[&["1/(2*t)"]]).unwrap();
        let r = relation_ideal(&s, &Nf::one(), &RelationConfig::new(2)).unwrap();
        assert_eq!(r.render(), vec!["x_1_1^2 - t"]);
        assert!(!r.bound.rigorous);
    }

    #[test]
    fn exponential_has_no_relation() {
        let s = OdeSystem::from_strings(&q(), &[&["1"]]).unwrap();
        let r = relation_ideal(&s, &Nf::zero(), &RelationConfig::new(3)).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn rational_solution() {
        let s = OdeSystem::from_strings(&q(), &[&["1/t"]]).unwrap();
        let r = relation_ideal(&s, &Nf::one(), &RelationConfig::new(1)).unwrap();
        assert_eq!(r.render(), vec!["x_1_1 - t"]);
    }

    #[test]
    fn algebraic_coefficients() {
        let s = OdeSystem::from_strings(&q(), &[&["1/(2*t)"]]).unwrap();
        let qm = Poly::new(vec![-KRat::t(), KRat::zero(), KRat::one()]);
        let r = relation_ideal_algebraic(&s, &Nf::one(), &RelationConfig::new(1), &qm).unwrap();
        assert_eq!(r.ideal.render(), vec!["x_1_1 - y_1"]);
    }

    #[test]
    fn explicit_order_is_rigorous() {
        let s = OdeSystem::from_strings(&q(), &[&["0"]]).unwrap();
        let cfg = RelationConfig::new(1).with_strategy(OrderStrategy::Explicit(50));
        assert_eq!(order_bound(&s, &Nf::zero(), &cfg).unwrap(), OrderBound { order: 50, rigorous: true });
        let r = relation_ideal(&s, &Nf::zero(), &cfg).unwrap();
        assert_eq!(r.render(), vec!["x_1_1 - 1"]);
    }
}

#[cfg(test)]
mod scale_tests {
    use super::*;

    #[test]
    fn harmonic_degree_two() {
        let s = OdeSystem::from_strings(&NumberField::rationals(), &[&["0", "1"], &["-1", "0"]]).unwrap();
        let r = relation_ideal(&s, &Nf::zero(), &RelationConfig::new(2)).unwrap();
        assert_eq!(r.basis.len(), 10);
        assert!(r.render().contains(&"x_1_1 - x_2_2".to_string()));
    }

    #[test]
    fn airy_degree_two() {
        let s = OdeSystem::from_strings(&NumberField::rationals(), &[&["0", "1"], &["t", "0"]]).unwrap();
        let r = relation_ideal(&s, &Nf::zero(), &RelationConfig::new(2)).unwrap();
        assert_eq!(r.render(), vec!["x_1_2*x_2_1 - x_1_1*x_2_2 + 1"]);
    }
}
