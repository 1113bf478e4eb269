//! Algebraic subgroups of `GL_n` given by ideals in the matrix entries.

use crate::algebra::factor::{factor_over, roots_in};
use crate::algebra::groebner::{groebner_basis, GbConfig, IdealBasis};
use crate::algebra::lattice::{self, IntVec};
use crate::algebra::numfield::Embedding;
use crate::algebra::multipoly::{matrix_vars, monomials_upto, mono_divides, Mono, MonoOrder, MultiPoly, Ring, Var};
use crate::algebra::zerodim::{solve_zero_dimensional, staircase_dim};
use crate::relations::RelationIdeal;
use crate::{AlgebraError, CMatrix, CMultiPoly, DgalError, Field, KMultiPoly, KRat, Nf, NumberField, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connected {
    Yes,
    No,
    Unknown,
}

/// Enumerated points of a finite group, over the field where they live.
#[derive(Clone, Debug)]
pub struct FinitePoints {
    pub field: NumberField,
    pub points: Vec<CMatrix>,
}

/// Subgroup of `GL_n(C)` cut out by a reduced grevlex Gröbner basis.
#[derive(Clone, Debug)]
pub struct AlgebraicSubgroup {
    pub n: usize,
    pub field: NumberField,
    pub ideal: IdealBasis<Nf>,
    pub group_verified: bool,
    pub connected: Connected,
    pub finite: Option<FinitePoints>,
}

/// Serializable summary of a subgroup.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupDoc {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<String>,
    pub generators: Vec<String>,
    pub group_verified: bool,
    pub connected: Connected,
    pub dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

/// `x_{i}_{j}` followed by `w_{i}_{j}`: the ring of pairs of matrices.
pub fn pair_ring(n: usize) -> Arc<Ring> {
    let mut vars = matrix_vars(n);
    vars.extend((0..n).flat_map(|i| (0..n).map(move |j| Var::W(i, j))));
    Ring::new(vars, MonoOrder::Grevlex)
}

/// Images of `x_{i}_{j}` under `X -> X W` in the pair ring.
fn product_images<F: Field>(n: usize, ring: &Arc<Ring>) -> Vec<MultiPoly<F>> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            (0..n).fold(MultiPoly::zero(ring), |acc, k| {
                acc + &MultiPoly::var(ring, Var::X(i, k)) * &MultiPoly::var(ring, Var::W(k, j))
            })
        })
        .collect()
}

/// Copy of `p` with every `x_{i}_{j}` renamed `w_{i}_{j}`, in the pair ring.
fn to_w<F: Field>(p: &MultiPoly<F>, pair: &Arc<Ring>) -> MultiPoly<F> {
    let m = p.ring().nvars();
    MultiPoly::from_terms(
        pair,
        p.terms()
            .iter()
            .map(|(mono, c)| {
                let mut out = vec![0; 2 * m];
                out[m..].copy_from_slice(mono);
                (out, c.clone())
            })
            .collect(),
    )
}

/// `det(X)` in the matrix ring.
pub fn det_poly<F: Field>(ring: &Arc<Ring>, n: usize) -> MultiPoly<F> {
    fn rec<F: Field>(ring: &Arc<Ring>, rows: &[usize], cols: &[usize]) -> MultiPoly<F> {
        if rows.is_empty() {
            return MultiPoly::one(ring);
        }
        let r = rows[0];
        let mut acc = MultiPoly::zero(ring);
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = &MultiPoly::var(ring, Var::X(r, c)) * &rec(ring, &rows[1..], &rest);
            acc = if k % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }
    let idx: Vec<usize> = (0..n).collect();
    rec(ring, &idx, &idx)
}

/// Split a `k`-linear combination of `W` monomials into constant-coefficient equations:
/// clear denominators and take each power of `t`.
fn split_constants(terms: &[(Mono, KRat)], target: &Arc<Ring>) -> Vec<CMultiPoly> {
    if terms.is_empty() {
        return Vec::new();
    }
    let mut lcm = crate::KPoly::one();
    for (_, c) in terms {
        let g = crate::KPoly::gcd(&lcm, c.den());
        lcm = lcm.exact_div(&g) * c.den().clone();
    }
    let scaled: Vec<(Mono, crate::KPoly)> =
        terms.iter().map(|(m, c)| (m.clone(), c.num().clone() * lcm.exact_div(c.den()))).collect();
    let top = scaled.iter().filter_map(|(_, p)| p.degree()).max().unwrap_or(0);
    (0..=top)
        .map(|e| MultiPoly::from_terms(target, scaled.iter().map(|(m, p)| (m.clone(), p.coeff(e))).collect()))
        .filter(|p| !p.is_zero())
        .collect()
}

/// Residual conditions of `P(X h)` against the relation span, as polynomials in `h`
/// (printed as `x_{i}_{j}`), one list per relation.
fn stabilizer_conditions(rel: &RelationIdeal<KRat>) -> Vec<Vec<CMultiPoly>> {
    let n = rel.n;
    let m = n * n;
    let pair = pair_ring(n);
    let images = product_images::<KRat>(n, &pair);
    let target = Ring::matrix(n);
    let pivots = rel.pivots();
    rel.basis
        .iter()
        .map(|p| {
            let moved = p.substitute(&images, &pair);
            // group by the X part of each monomial
            let mut by_x: BTreeMap<Mono, Vec<(Mono, KRat)>> = BTreeMap::new();
            for (mono, c) in moved.terms() {
                by_x.entry(mono[..m].to_vec()).or_default().push((mono[m..].to_vec(), c.clone()));
            }
            let coeff_at = |xm: &Mono| -> KMultiPoly {
                let terms = by_x.get(xm).cloned().unwrap_or_default();
                MultiPoly::from_terms(&target, terms)
            };
            let pivot_coeffs: Vec<KMultiPoly> = pivots.iter().map(&coeff_at).collect();
            let mut all_x: Vec<Mono> = by_x.keys().cloned().collect();
            for q in &rel.basis {
                all_x.extend(q.terms().iter().map(|(mm, _)| mm.clone()));
            }
            all_x.sort();
            all_x.dedup();
            let mut out = Vec::new();
            for xm in all_x.iter().filter(|xm| !pivots.contains(xm)) {
                let mut resid = coeff_at(xm);
                for (q, pc) in rel.basis.iter().zip(&pivot_coeffs) {
                    let c = q.coeff(xm);
                    if !c.is_zero() {
                        resid = &resid - &pc.scale(&c);
                    }
                }
                let terms: Vec<(Mono, KRat)> = resid.terms().to_vec();
                out.extend(split_constants(&terms, &target));
            }
            out
        })
        .collect()
}

/// `{h : P(X h) lies in the span of the relations for every relation P}`.
pub fn stabilizer_group(rel: &RelationIdeal<KRat>, cfg: &GbConfig) -> Result<AlgebraicSubgroup> {
    let gens: Vec<CMultiPoly> = stabilizer_conditions(rel).into_iter().flatten().collect();
    AlgebraicSubgroup::from_generators(rel.n, &rel.field, &gens, cfg)
}

impl AlgebraicSubgroup {
    /// Subgroup with the given defining polynomials; the Gröbner basis is computed here.
    pub fn from_generators(n: usize, field: &NumberField, gens: &[CMultiPoly], cfg: &GbConfig) -> Result<Self> {
        let ring = Ring::matrix(n);
        let ideal = groebner_basis(&ring, gens, cfg)?;
        let connected = if ideal.gens().is_empty() { Connected::Yes } else { Connected::Unknown };
        Ok(AlgebraicSubgroup { n, field: field.clone(), ideal, group_verified: false, connected, finite: None })
    }

    pub fn general_linear(n: usize, field: &NumberField) -> Self {
        let ring = Ring::matrix(n);
        AlgebraicSubgroup {
            n,
            field: field.clone(),
            ideal: IdealBasis::assume_groebner(&ring, Vec::new()),
            group_verified: true,
            connected: Connected::Yes,
            finite: None,
        }
    }

    pub fn special_linear(n: usize, field: &NumberField) -> Self {
        let ring = Ring::matrix(n);
        let d = det_poly::<Nf>(&ring, n) - MultiPoly::one(&ring);
        AlgebraicSubgroup {
            n,
            field: field.clone(),
            ideal: IdealBasis::assume_groebner(&ring, vec![d.monic()]),
            group_verified: true,
            connected: Connected::Yes,
            finite: None,
        }
    }

    /// The trivial group `{I}`.
    pub fn trivial(n: usize, field: &NumberField) -> Self {
        let ring = Ring::matrix(n);
        let gens = identity_ideal_gens(n, &ring);
        AlgebraicSubgroup {
            n,
            field: field.clone(),
            ideal: IdealBasis::assume_groebner(&ring, gens),
            group_verified: true,
            connected: Connected::Yes,
            finite: Some(FinitePoints { field: field.clone(), points: vec![CMatrix::identity(n)] }),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.ideal.ring()
    }

    pub fn generators(&self) -> &[CMultiPoly] {
        self.ideal.gens()
    }

    pub fn render(&self) -> Vec<String> {
        self.generators().iter().map(|g| g.render()).collect()
    }

    pub fn contains_identity(&self) -> bool {
        let id = identity_point(self.n);
        self.generators().iter().all(|g| g.eval(&id).is_zero())
    }

    /// Does the matrix satisfy every generator? (Its field must contain the group's.)
    pub fn contains_matrix(&self, g: &CMatrix) -> bool {
        let pt: Vec<Nf> = (0..self.n).flat_map(|i| (0..self.n).map(move |j| (i, j))).map(|ij| g[ij].clone()).collect();
        !g.det().is_zero() && self.generators().iter().all(|q| q.eval(&pt).is_zero())
    }

    /// Is `self` contained in `other`? Checked by reducing `other`'s generators.
    pub fn is_subgroup_of(&self, other: &AlgebraicSubgroup) -> bool {
        other.generators().iter().all(|g| self.ideal.contains(g))
    }

    pub fn same_ideal(&self, other: &AlgebraicSubgroup) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    /// Krull dimension, from the leading-monomial ideal.
    pub fn dimension(&self) -> usize {
        if self.ideal.is_unit() {
            return 0;
        }
        let lms = self.ideal.leading_monomials();
        let nv = self.n * self.n;
        let mut best = 0;
        for mask in 0u64..(1u64 << nv) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let independent = lms.iter().all(|m| m.iter().enumerate().any(|(k, &e)| e > 0 && mask & (1 << k) == 0));
            if independent {
                best = size;
            }
        }
        best
    }

    /// Largest generator degree.
    pub fn degree_bound(&self) -> u32 {
        self.generators().iter().map(|g| g.degree()).max().unwrap_or(0)
    }

    pub fn order(&self) -> Option<usize> {
        self.finite.as_ref().map(|f| f.points.len())
    }

    pub fn to_doc(&self) -> GroupDoc {
        GroupDoc {
            n: self.n,
            minpoly: (!self.field.is_rationals()).then(|| self.field.minpoly().render("g")),
            generators: self.render(),
            group_verified: self.group_verified,
            connected: self.connected,
            dimension: self.dimension(),
            order: self.order(),
        }
    }

    fn with_ideal(&self, field: &NumberField, ideal: IdealBasis<Nf>, connected: Connected) -> Self {
        AlgebraicSubgroup { n: self.n, field: field.clone(), ideal, group_verified: false, connected, finite: None }
    }

    /// Same group with coefficients moved into a larger field.
    pub fn extend(&self, emb: &crate::algebra::numfield::Embedding) -> Self {
        let gens = self.generators().iter().map(|g| g.map(|c| emb.apply(c))).collect();
        AlgebraicSubgroup {
            field: emb.target.clone(),
            ideal: IdealBasis::assume_groebner(self.ring(), gens),
            finite: None,
            ..self.clone()
        }
    }
}

fn identity_point(n: usize) -> Vec<Nf> {
    (0..n).flat_map(|i| (0..n).map(move |j| if i == j { Nf::one() } else { Nf::zero() })).collect()
}

fn identity_ideal_gens(n: usize, ring: &Arc<Ring>) -> Vec<CMultiPoly> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let x = MultiPoly::var(ring, Var::X(i, j));
            if i == j {
                x - MultiPoly::one(ring)
            } else {
                x
            }
        })
        .collect()
}

/// The generators of `H(X)` and `H(W)` together: a Gröbner basis of `H x H` in the pair ring.
fn doubled_ideal(h: &AlgebraicSubgroup) -> IdealBasis<Nf> {
    let pair = pair_ring(h.n);
    let mut gens: Vec<CMultiPoly> = h.generators().iter().map(|g| g.embed(&pair)).collect();
    gens.extend(h.generators().iter().map(|g| to_w(g, &pair)));
    IdealBasis::assume_groebner(&pair, gens)
}

/// Identity, stabilizer residuals, and closure under products.
pub fn verify_group_axioms(h: &mut AlgebraicSubgroup, rel: Option<&RelationIdeal<KRat>>) -> Result<()> {
    if let Some(g) = h.generators().iter().find(|g| !g.eval(&identity_point(h.n)).is_zero()) {
        return Err(DgalError::Verification(format!("identity does not satisfy {}", g.render())));
    }
    if let Some(rel) = rel {
        for (p, conds) in rel.basis.iter().zip(stabilizer_conditions(rel)) {
            if let Some(c) = conds.iter().find(|c| !h.ideal.contains(c)) {
                return Err(DgalError::Verification(format!(
                    "relation {} is not preserved: residual {} survives",
                    p.render(),
                    c.render()
                )));
            }
        }
    }
    let doubled = doubled_ideal(h);
    let pair = doubled.ring().clone();
    let images = product_images::<Nf>(h.n, &pair);
    for g in h.generators() {
        let moved = g.substitute(&images, &pair);
        if !doubled.contains(&moved) {
            return Err(DgalError::Verification(format!("not closed under products: {}", g.render())));
        }
    }
    h.group_verified = true;
    Ok(())
}

/// All points (with nonzero determinant) of a finite subgroup, with the product table checked.
pub fn group_points_finite(h: &AlgebraicSubgroup, cfg: &GbConfig) -> Result<FinitePoints> {
    if let Some(f) = &h.finite {
        return Ok(f.clone());
    }
    let n = h.n;
    let gens = h.generators().to_vec();
    let sol = if gens.is_empty() {
        return Err(AlgebraError::PositiveDimensional { free_vars: matrix_vars(n).iter().map(|v| v.to_string()).collect() }.into());
    } else {
        solve_zero_dimensional(&h.field, &gens, cfg)?
    };
    let points: Vec<CMatrix> = sol
        .points
        .iter()
        .map(|p| CMatrix::from_fn(n, n, |i, j| sol.field.attach(p[i * n + j].clone())))
        .filter(|m| !m.det().is_zero())
        .collect();
    for a in &points {
        for b in &points {
            let ab = a * b;
            if !points.contains(&ab) {
                return Err(DgalError::Verification(format!("point set not closed under products ({} points)", points.len())));
            }
        }
    }
    Ok(FinitePoints { field: sol.field, points })
}

/// How an identity component was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentClass {
    Finite,
    DiagonalBinomial,
    CertifiedConnected,
}

#[derive(Clone, Debug)]
pub struct IdentityComponent {
    pub group: AlgebraicSubgroup,
    pub class: ComponentClass,
    /// `[H : H°]` when known.
    pub component_count: Option<usize>,
    /// The finite group itself, in the finite class.
    pub points: Option<FinitePoints>,
    /// From the field of `H` into the field of `group`.
    pub embedding: Embedding,
}

/// `H°` for the supported classes; anything else is refused.
pub fn identity_component(h: &AlgebraicSubgroup, cfg: &GbConfig) -> Result<IdentityComponent> {
    let n = h.n;
    if staircase_dim(&h.ideal).is_ok() {
        let pts = group_points_finite(h, cfg)?;
        let mut triv = AlgebraicSubgroup::trivial(n, &h.field);
        triv.group_verified = true;
        return Ok(IdentityComponent {
            group: triv,
            class: ComponentClass::Finite,
            component_count: Some(pts.points.len()),
            points: Some(pts),
            embedding: h.field.identity_embedding(),
        });
    }
    if h.connected == Connected::Yes || h.generators().is_empty() || h.same_ideal(&AlgebraicSubgroup::special_linear(n, &h.field)) {
        let mut g = h.clone();
        g.connected = Connected::Yes;
        return Ok(IdentityComponent { group: g, class: ComponentClass::CertifiedConnected, component_count: Some(1), points: None, embedding: h.field.identity_embedding() });
    }
    if let Some((comp, count)) = diagonal_binomial_component(h, cfg)? {
        return Ok(IdentityComponent { group: comp, class: ComponentClass::DiagonalBinomial, component_count: Some(count), points: None, embedding: h.field.identity_embedding() });
    }
    if let Some(ic) = conjugation_probe(h, cfg)? {
        return Ok(ic);
    }
    Err(DgalError::Unsupported(format!(
        "identity component of the group {{{}}} is outside the supported classes",
        h.render().join(", ")
    )))
}

/// Exponent vector `a - b` of a binomial `x^a - x^b` supported on the diagonal.
fn diagonal_binomial_exponent(g: &CMultiPoly, n: usize) -> Option<IntVec> {
    let t = g.terms();
    if t.len() != 2 || !t[0].1.is_one() || !(t[1].1.clone() + Nf::one()).is_zero() {
        return None;
    }
    let diag = |m: &Mono| -> Option<Vec<i64>> {
        let mut v = vec![0i64; n];
        for (k, &e) in m.iter().enumerate() {
            if e > 0 {
                let (i, j) = (k / n, k % n);
                if i != j {
                    return None;
                }
                v[i] = e as i64;
            }
        }
        Some(v)
    };
    let (a, b) = (diag(&t[0].0)?, diag(&t[1].0)?);
    Some(a.iter().zip(&b).map(|(x, y)| BigInt::from(x - y)).collect())
}

/// Class of subgroups of the diagonal torus defined by `x^a = x^b` binomials.
fn diagonal_binomial_component(h: &AlgebraicSubgroup, cfg: &GbConfig) -> Result<Option<(AlgebraicSubgroup, usize)>> {
    let n = h.n;
    let ring = h.ring().clone();
    let off_diag: Vec<CMultiPoly> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| MultiPoly::var(&ring, Var::X(i, j)))
        .collect();
    if !off_diag.iter().all(|x| h.ideal.contains(x)) {
        return Ok(None);
    }
    let mut lat: Vec<IntVec> = Vec::new();
    for g in h.generators() {
        if off_diag.contains(g) {
            continue;
        }
        match diagonal_binomial_exponent(g, n) {
            Some(v) => lat.push(v),
            None => return Ok(None),
        }
    }
    let sat = lattice::saturate(&lat, n);
    let count = lattice::saturation_index(&lat, n).to_usize().ok_or_else(|| AlgebraError::ResourceCap("component count".into()))?;
    let comp = torus_ideal(&ring, n, &sat, &off_diag, cfg)?;
    let mut g = h.with_ideal(&h.field, comp, Connected::Yes);
    g.group_verified = h.group_verified;
    Ok(Some((g, count)))
}

/// Ideal of the diagonal torus `{x^u = 1, u in lattice}` (lattice saturated), with the off-diagonal entries zero.
pub fn torus_ideal(ring: &Arc<Ring>, n: usize, lat: &[IntVec], extra: &[CMultiPoly], cfg: &GbConfig) -> Result<IdealBasis<Nf>> {
    let mut vars = vec![Var::Y(0)];
    vars.extend(ring.vars().iter().copied());
    let elim = Ring::new(vars, MonoOrder::Block(1));
    let diag_mono = |u: &IntVec, positive: bool| -> Mono {
        let mut m = vec![0u32; 1 + n * n];
        for (i, e) in u.iter().enumerate() {
            let e = if positive { e.clone() } else { -e.clone() };
            if e.is_positive() {
                m[1 + i * n + i] = e.to_u32().expect("small exponent");
            }
        }
        m
    };
    let mut gens: Vec<CMultiPoly> = lat
        .iter()
        .map(|u| MultiPoly::from_terms(&elim, vec![(diag_mono(u, true), Nf::one()), (diag_mono(u, false), -Nf::one())]))
        .collect();
    let mut ydet = vec![1u32; 1];
    ydet.extend((0..n * n).map(|k| u32::from(k / n == k % n)));
    gens.push(MultiPoly::from_terms(&elim, vec![(ydet, Nf::one()), (vec![0; 1 + n * n], -Nf::one())]));
    gens.extend(extra.iter().map(|e| e.embed(&elim)));
    let gb = groebner_basis(&elim, &gens, cfg)?;
    let kept: Vec<CMultiPoly> = gb.eliminate(1).iter().map(|g| g.embed(ring)).collect();
    Ok(groebner_basis(ring, &kept, cfg)?)
}

/// Commutative groups: diagonalize by the eigenvectors of a regular point and retry the torus class.
fn conjugation_probe(h: &AlgebraicSubgroup, cfg: &GbConfig) -> Result<Option<IdentityComponent>> {
    let n = h.n;
    if !is_commutative(h) {
        return Ok(None);
    }
    let Some((field, point, emb)) = regular_point(h, cfg)? else {
        return Ok(None);
    };
    let Some((field, p, emb2)) = eigenbasis(&field, &point) else {
        return Ok(None);
    };
    let emb = emb.then(&emb2);
    let pinv = p.inverse().expect("eigenbasis is invertible");
    let ring = h.ring().clone();
    // Y = P^{-1} X P lies in the conjugate group iff P Y P^{-1} lies in H
    let sym = CMatrixPoly::symbolic(&ring, n);
    let images = sym.conj(&p, &pinv).entries;
    let gens: Vec<CMultiPoly> = h
        .generators()
        .iter()
        .map(|g| g.map(|c| emb.apply(c)).substitute(&images, &ring))
        .collect();
    let conj = AlgebraicSubgroup::from_generators(n, &field, &gens, cfg)?;
    let Some((comp, count)) = diagonal_binomial_component(&conj, cfg)? else {
        return Ok(None);
    };
    let group = if count == 1 {
        let mut g = h.extend(&emb);
        g.connected = Connected::Yes;
        g
    } else {
        let back = sym.conj(&pinv, &p).entries;
        let gens: Vec<CMultiPoly> = comp.generators().iter().map(|g| g.substitute(&back, &ring)).collect();
        let mut g = AlgebraicSubgroup::from_generators(n, &field, &gens, cfg)?;
        g.connected = Connected::Yes;
        g
    };
    Ok(Some(IdentityComponent { group, class: ComponentClass::DiagonalBinomial, component_count: Some(count), points: None, embedding: emb }))
}

fn is_commutative(h: &AlgebraicSubgroup) -> bool {
    let doubled = doubled_ideal(h);
    let pair = doubled.ring().clone();
    let xw = product_images::<Nf>(h.n, &pair);
    let w_ring = pair.clone();
    // W X: swap roles via renaming
    let wx: Vec<CMultiPoly> = (0..h.n)
        .flat_map(|i| (0..h.n).map(move |j| (i, j)))
        .map(|(i, j)| {
            (0..h.n).fold(MultiPoly::zero(&w_ring), |acc, k| {
                acc + &MultiPoly::var(&w_ring, Var::W(i, k)) * &MultiPoly::var(&w_ring, Var::X(k, j))
            })
        })
        .collect();
    xw.iter().zip(&wx).all(|(a, b)| doubled.contains(&(a - b)))
}

/// A point of `H` with squarefree characteristic polynomial, found by pinning free variables.
fn regular_point(h: &AlgebraicSubgroup, cfg: &GbConfig) -> Result<Option<(NumberField, CMatrix, Embedding)>> {
    let n = h.n;
    let ring = h.ring().clone();
    let lms = h.ideal.leading_monomials();
    let free: Vec<usize> = (0..n * n).filter(|&k| !lms.iter().any(|m| m[k] > 0 && m.iter().filter(|&&e| e > 0).count() == 1)).collect();
    // first pass keeps the field, the second accepts extensions
    for same_field in [true, false] {
        for seed in [2i64, 3, 5, 7, 11, -2, 13, 0, -1] {
            let mut gens = h.generators().to_vec();
            for (r, &k) in free.iter().enumerate() {
                let v = seed + r as i64;
                gens.push(MultiPoly::var_at(&ring, k) - MultiPoly::constant(&ring, Nf::from_i64(v)));
            }
            let sol = match solve_zero_dimensional(&h.field, &gens, cfg) {
                Ok(s) => s,
                Err(AlgebraError::PositiveDimensional { .. }) => continue,
                Err(e) => return Err(e.into()),
            };
            if same_field && sol.field.degree() != h.field.degree() {
                continue;
            }
            for p in &sol.points {
                let m = CMatrix::from_fn(n, n, |i, j| sol.field.attach(p[i * n + j].clone()));
                if !m.det().is_zero() && m.charpoly().is_squarefree() {
                    return Ok(Some((sol.field.clone(), m, sol.embedding.clone())));
                }
            }
        }
    }
    Ok(None)
}

/// Eigenvector matrix of a matrix with squarefree characteristic polynomial.
fn eigenbasis(field: &NumberField, m: &CMatrix) -> Option<(NumberField, CMatrix, Embedding)> {
    let n = m.nrows();
    let mut emb = field.identity_embedding();
    let mut field = field.clone();
    let mut m = m.clone();
    loop {
        let cp = m.charpoly();
        let roots = roots_in(&field, &cp);
        if roots.len() == n {
            let mut cols: Vec<Vec<Nf>> = Vec::new();
            for r in &roots {
                let shifted = &m - &CMatrix::identity(n).scale(r);
                let ns = shifted.nullspace();
                if ns.len() != 1 {
                    return None;
                }
                cols.push(ns[0].iter().map(|c| field.attach(c.clone())).collect());
            }
            return Some((field.clone(), CMatrix::from_fn(n, n, |i, j| cols[j][i].clone()), emb));
        }
        let f = factor_over(&field, &cp).into_iter().map(|(f, _)| f).find(|f| f.degree() > Some(1))?;
        let adj = field.adjoin(&f).ok()?;
        m = m.map(|c| adj.embedding.apply(c));
        emb = emb.then(&adj.embedding);
        field = adj.field;
    }
}

/// Matrix of polynomials, for symbolic conjugation.
struct CMatrixPoly {
    n: usize,
    entries: Vec<CMultiPoly>,
}

impl CMatrixPoly {
    fn symbolic(ring: &Arc<Ring>, n: usize) -> Self {
        CMatrixPoly { n, entries: (0..n * n).map(|k| MultiPoly::var_at(ring, k)).collect() }
    }

    /// `left * self * right` with constant matrices.
    fn conj(&self, left: &CMatrix, right: &CMatrix) -> Self {
        let n = self.n;
        let ring = self.entries[0].ring().clone();
        let mut tmp = vec![MultiPoly::zero(&ring); n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    tmp[i * n + j] = &tmp[i * n + j] + &self.entries[k * n + j].scale(&left[(i, k)]);
                }
            }
        }
        let mut out = vec![MultiPoly::zero(&ring); n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[i * n + j] = &out[i * n + j] + &tmp[i * n + k].scale(&right[(k, j)]);
                }
            }
        }
        CMatrixPoly { n, entries: out }
    }
}

/// A character `P(X) / det(X)^det_power`.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub poly: CMultiPoly,
    pub det_power: u32,
}

impl Character {
    pub fn render(&self) -> String {
        match self.det_power {
            0 => self.poly.render(),
            k => format!("({})/det^{k}", self.poly.render()),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.det_power == 0 && self.poly.is_constant()
    }
}

/// Characters found by the degree-bounded ansatz.
#[derive(Clone, Debug)]
pub struct CharacterSet {
    pub field: NumberField,
    /// Every solution of the ansatz, including the trivial character.
    pub all: Vec<Character>,
    /// A maximal subset independent in the character lattice.
    pub generators: Vec<Character>,
    pub rank: usize,
    /// From the group's field into `field`.
    pub embedding: Embedding,
    /// Number of standard monomials in the ansatz.
    pub ansatz_size: usize,
}

/// Polynomial characters of degree `<= max_degree` of a connected group.
pub fn characters_generators(h: &AlgebraicSubgroup, max_degree: u32, cfg: &GbConfig) -> Result<CharacterSet> {
    if h.connected != Connected::Yes {
        return Err(DgalError::Invalid("characters need a group certified connected".into()));
    }
    let n = h.n;
    let ring = h.ring().clone();
    let lms = h.ideal.leading_monomials();
    let basis: Vec<Mono> =
        monomials_upto(n * n, max_degree).into_iter().filter(|m| !lms.iter().any(|l| mono_divides(l, m))).collect();
    let s = basis.len();
    let cring = Ring::new((0..s).map(Var::Y).collect(), MonoOrder::Grevlex);
    let doubled = doubled_ideal(h);
    let pair = doubled.ring().clone();
    let images = product_images::<Nf>(n, &pair);
    let nv = n * n;
    // equations indexed by monomials of the pair ring, linear forms in the c's
    let mut eqs: BTreeMap<Mono, CMultiPoly> = BTreeMap::new();
    let cvar = |i: usize| MultiPoly::<Nf>::var(&cring, Var::Y(i));
    for (i, mi) in basis.iter().enumerate() {
        for (j, mj) in basis.iter().enumerate() {
            let mut mono = mi.clone();
            mono.extend_from_slice(mj);
            let e = eqs.entry(mono).or_insert_with(|| MultiPoly::zero(&cring));
            *e = &*e + &(&cvar(i) * &cvar(j));
        }
        let xm = MultiPoly::from_terms(&ring, vec![(mi.clone(), Nf::one())]);
        let moved = doubled.reduce(&xm.substitute(&images, &pair));
        for (mono, c) in moved.terms() {
            let e = eqs.entry(mono.clone()).or_insert_with(|| MultiPoly::zero(&cring));
            *e = &*e - &cvar(i).scale(c);
        }
    }
    let mut system: Vec<CMultiPoly> = eqs.into_values().filter(|p| !p.is_zero()).collect();
    // P(I) = 1
    let id = identity_point(n);
    let at_id = basis.iter().enumerate().fold(MultiPoly::constant(&cring, -Nf::one()), |acc, (i, m)| {
        let v = MultiPoly::from_terms(&ring, vec![(m.clone(), Nf::one())]).eval(&id);
        if v.is_zero() {
            acc
        } else {
            acc + cvar(i).scale(&v)
        }
    });
    system.push(at_id);
    let sol = solve_zero_dimensional(&h.field, &system, cfg).map_err(|e| match e {
        AlgebraError::PositiveDimensional { free_vars } => DgalError::Verification(format!(
            "character ansatz is not zero-dimensional (free: {})",
            free_vars.join(", ")
        )),
        other => other.into(),
    })?;
    let field = sol.field.clone();
    let all: Vec<Character> = sol
        .points
        .iter()
        .map(|c| Character {
            poly: MultiPoly::from_terms(&ring, basis.iter().cloned().zip(c.iter().map(|x| field.attach(x.clone()))).collect()),
            det_power: 0,
        })
        .collect();
    // rank via differentials at I restricted to the tangent space
    let jac = CMatrix::from_rows(h.generators().iter().map(|g| gradient_at_identity(&g.map(|c| sol.embedding.apply(c)), nv)).collect::<Vec<_>>());
    let tangent = if h.generators().is_empty() {
        (0..nv).map(|k| (0..nv).map(|j| if j == k { Nf::one() } else { Nf::zero() }).collect()).collect()
    } else {
        jac.nullspace()
    };
    let mut generators = Vec::new();
    let mut rows: Vec<Vec<Nf>> = Vec::new();
    // low degree first, so generators are primitive where the ansatz allows
    let mut by_degree: Vec<&Character> = all.iter().collect();
    by_degree.sort_by_key(|c| (c.poly.degree(), c.poly.len()));
    for ch in by_degree {
        let grad = gradient_at_identity(&ch.poly, nv);
        let restricted: Vec<Nf> = tangent.iter().map(|t| dot(&grad, t)).collect();
        let mut trial = rows.clone();
        trial.push(restricted);
        if CMatrix::from_rows(trial.clone()).rank() > rows.len() {
            rows = trial;
            generators.push(ch.clone());
        }
    }
    Ok(CharacterSet { field, embedding: sol.embedding.clone(), rank: rows.len(), all, generators, ansatz_size: s })
}

fn dot(a: &[Nf], b: &[Nf]) -> Nf {
    a.iter().zip(b).fold(Nf::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Partial derivatives at the identity matrix.
fn gradient_at_identity(p: &CMultiPoly, nv: usize) -> Vec<Nf> {
    let n = (nv as f64).sqrt().round() as usize;
    let id = identity_point(n);
    (0..nv)
        .map(|k| {
            p.terms().iter().fold(Nf::zero(), |acc, (m, c)| {
                if m[k] == 0 {
                    return acc;
                }
                let mut dm = m.clone();
                dm[k] -= 1;
                let val = dm.iter().zip(&id).all(|(&e, x)| e == 0 || !x.is_zero());
                if val {
                    acc + c.clone() * Nf::from_i64(m[k] as i64)
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// `H` intersected with the kernels of the given characters.
/// `emb` maps the group's field into the field of the characters.
pub fn kernel_of_characters(h: &AlgebraicSubgroup, chars: &[Character], emb: &Embedding, cfg: &GbConfig) -> Result<AlgebraicSubgroup> {
    let ring = h.ring().clone();
    let det = det_poly::<Nf>(&ring, h.n);
    let field = &emb.target;
    let mut gens: Vec<CMultiPoly> = h.generators().iter().map(|g| g.map(|c| emb.apply(c))).collect();
    for ch in chars {
        gens.push(&ch.poly - &det.pow(ch.det_power));
    }
    let mut k = AlgebraicSubgroup::from_generators(h.n, field, &gens, cfg)?;
    k.group_verified = h.group_verified;
    Ok(k)
}


#[cfg(test)]
mod scale_tests {
    use super::*;
    use crate::ode::OdeSystem;
    use crate::relations::{relation_ideal, RelationConfig};

    #[test]
    fn harmonic_rotation_group() {
        let q = NumberField::rationals();
        let s = OdeSystem::from_strings(&q, &[&["0", "1"], &["-1", "0"]]).unwrap();
        let rel = relation_ideal(&s, &Nf::zero(), &RelationConfig::new(2)).unwrap();
        let cfg = GbConfig::default();
        let mut h = stabilizer_group(&rel, &cfg).unwrap();
        verify_group_axioms(&mut h, Some(&rel)).unwrap();
        assert_eq!(h.dimension(), 1);
        let ic = identity_component(&h, &cfg).unwrap();
        assert_eq!(ic.component_count, Some(1));
        let cs = characters_generators(&ic.group, 1, &cfg).unwrap();
        assert_eq!(cs.rank, 1);
        assert_eq!(cs.field.degree(), 2);
    }

    #[test]
    fn sl2_and_torus_characters() {
        let q = NumberField::rationals();
        let cfg = GbConfig::default();
        let cs = characters_generators(&AlgebraicSubgroup::special_linear(2, &q), 2, &cfg).unwrap();
        assert_eq!(cs.rank, 0);
        assert_eq!(cs.all.len(), 1);
        let ring = Ring::matrix(2);
        let t = AlgebraicSubgroup::from_generators(
            2,
            &q,
            &[MultiPoly::var(&ring, Var::X(0, 1)), MultiPoly::var(&ring, Var::X(1, 0))],
            &cfg,
        )
        .unwrap();
        let ic = identity_component(&t, &cfg).unwrap();
        let cs = characters_generators(&ic.group, 1, &cfg).unwrap();
        assert_eq!(cs.rank, 2);
    }
}
