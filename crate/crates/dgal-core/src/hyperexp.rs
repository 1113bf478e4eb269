//! Hyperexponential elements from characters, and the multiplicative relations among them.
//!
//! A vector `m` is admissible when `sum m_j v_j = f'/f` for some `f` in `k`; the
//! admissible vectors form a lattice, read off from partial fractions.

use crate::algebra::factor::factor_over;
use crate::algebra::groebner::GbConfig;
use crate::algebra::lattice::{self, IntVec};
use crate::algebra::multipoly::{MultiPoly, Ring, Var};
use crate::algebra::pade::stable_reconstruction;
use crate::algebra::ratfunc::series_div;
use crate::groups::{torus_ideal, AlgebraicSubgroup, Character, Connected};
use crate::ode::{series_mul, TruncSeries};
use crate::relations::MonomialSeries;
use crate::{AlgebraError, DgalError, Field, KPoly, KRat, Nf, NumberField, Rational, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Partial-fraction data of `v` at one irreducible factor `φ` of its denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleData {
    pub factor: KPoly,
    pub multiplicity: u32,
    /// `A_j` with `v = ... + sum_j A_j / φ^j + ...`, `deg A_j < deg φ`, `j = 1..=multiplicity`.
    pub parts: Vec<KPoly>,
    /// `A_1 / φ' mod φ`: the residue at every root of `φ`.
    pub residue_class: KPoly,
}

impl PoleData {
    /// The common residue when it is a rational number.
    pub fn rational_residue(&self) -> Option<Rational> {
        if self.residue_class.deg_or_zero() > 0 {
            return None;
        }
        self.residue_class.coeff(0).as_rational()
    }
}

/// `h` with `h'/h = v` rational, in partial-fraction form.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperexpElement {
    pub v: KRat,
    pub poly_part: KPoly,
    pub poles: Vec<PoleData>,
}

impl HyperexpElement {
    pub fn new(field: &NumberField, v: KRat) -> Self {
        let (poly_part, rem) = v.num().divrem(v.den());
        let den = v.den().clone();
        let mut poles = Vec::new();
        for (phi, e) in factor_over(field, &den) {
            let pe = phi.pow(e);
            let rest = den.exact_div(&pe);
            let inv = rest.inv_mod(&pe).expect("coprime cofactor");
            let mut b = (rem.clone() * inv).rem(&pe);
            // φ-adic digits B_0, B_1, ...; A_j = B_{e-j}
            let mut digits = Vec::new();
            for _ in 0..e {
                let (q, r) = b.divrem(&phi);
                digits.push(r);
                b = q;
            }
            let parts: Vec<KPoly> = (1..=e as usize).map(|j| digits[e as usize - j].clone()).collect();
            let dphi = phi.derivative().inv_mod(&phi).expect("squarefree factor");
            let residue_class = (parts[0].clone() * dphi).rem(&phi);
            poles.push(PoleData { factor: phi, multiplicity: e, parts, residue_class });
        }
        HyperexpElement { v, poly_part, poles }
    }

    /// Reassemble `v` from its partial fractions.
    pub fn recombine(&self) -> KRat {
        let mut acc = KRat::from_poly(self.poly_part.clone());
        for p in &self.poles {
            for (j, a) in p.parts.iter().enumerate() {
                acc = acc + KRat::new(a.clone(), p.factor.pow(j as u32 + 1));
            }
        }
        acc
    }
}

/// Series of `χ(S)` for a character with constant coefficients.
pub fn character_series(ch: &Character, s: &TruncSeries, len: usize) -> Vec<Nf> {
    let mut ms = MonomialSeries::new(s, len);
    let mut acc = vec![Nf::zero(); len];
    for (m, c) in ch.poly.terms() {
        let t = ms.get(m);
        acc.iter_mut().zip(t).for_each(|(a, b)| *a = a.clone() + c.clone() * b);
    }
    if ch.det_power > 0 {
        let det = s.det();
        let mut dp = det.clone();
        for _ in 1..ch.det_power {
            dp = series_mul(&dp, &det, len);
        }
        acc = series_div(&acc, &dp, len).expect("det(S) is a unit");
    }
    acc
}

/// `v = χ(S)'/χ(S)` reconstructed as a rational function of degree `<= max_degree`.
pub fn logderiv_from_character(ch: &Character, s: &TruncSeries, field: &NumberField, max_degree: usize) -> Result<HyperexpElement> {
    let need = 2 * max_degree + 5;
    if s.order() + 1 < need {
        return Err(DgalError::Margin { have: s.order(), need: need - 1 });
    }
    let len = s.order() + 1;
    let h = character_series(ch, s, len);
    if h[0].is_zero() {
        return Err(DgalError::Invalid("character vanishes at the expansion point".into()));
    }
    let dh: Vec<Nf> = (1..len).map(|k| h[k].clone() * Nf::from_i64(k as i64)).collect();
    let v = series_div(&dh, &h, len - 1).expect("unit constant term");
    let r = stable_reconstruction(&v, &s.point, max_degree).ok_or_else(|| {
        AlgebraError::ResourceCap(format!("log-derivative did not stabilize at degree <= {max_degree}"))
    })?;
    Ok(HyperexpElement::new(field, r))
}

/// `h_j^{m_j} = f_j * prod_i h_{η_i}^{m_{i,j}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub index: usize,
    pub exponent: BigInt,
    /// `(position in η, m_{i,j})`, zero exponents omitted.
    pub eta_exponents: Vec<(usize, BigInt)>,
    pub cofactor: KRat,
}

#[derive(Clone, Debug)]
pub struct RelationLattice {
    pub l: usize,
    pub eta: Vec<usize>,
    pub relations: Vec<Relation>,
    /// Hermite basis of all admissible vectors.
    pub admissible: Vec<IntVec>,
    vs: Vec<HyperexpElement>,
    factors: Vec<KPoly>,
    /// Rational residue of each `v_j` at each factor.
    residues: Vec<Vec<Rational>>,
    constant_only: bool,
}

impl RelationLattice {
    /// `f` with `f'/f = sum m_j v_j`, normalized monic, if `m` is admissible.
    pub fn cofactor(&self, m: &[BigInt]) -> Option<KRat> {
        if !lattice::contains(&self.admissible, &m.to_vec()) && m.iter().any(|x| !x.is_zero()) {
            return None;
        }
        if self.constant_only {
            return Some(KRat::one());
        }
        let mut f = KRat::one();
        for (k, phi) in self.factors.iter().enumerate() {
            let r = m.iter().zip(&self.residues).fold(Rational::zero(), |acc, (mj, res)| acc + Rational::from(mj.clone()) * res[k].clone());
            debug_assert!(r.is_integer());
            let e = r.to_integer();
            let p = KRat::from_poly(phi.pow(e.abs().to_u32().expect("small exponent")));
            f = if e.is_negative() { f / p } else { f * p };
        }
        Some(f)
    }

    /// `sum m_j v_j`.
    pub fn combination(&self, m: &[BigInt]) -> KRat {
        m.iter().zip(&self.vs).fold(KRat::zero(), |acc, (mj, h)| acc + KRat::from_i64(mj.to_i64().expect("small")) * h.v.clone())
    }

    /// `f'/f = m_j v_j - sum m_{i,j} v_{η_i}` for the relation.
    pub fn verify(&self, rel: &Relation) -> bool {
        let mut m = vec![BigInt::zero(); self.l];
        m[rel.index] = rel.exponent.clone();
        for (i, e) in &rel.eta_exponents {
            m[self.eta[*i]] = -e.clone();
        }
        let f = &rel.cofactor;
        f.derivative() == self.combination(&m) * f.clone()
    }
}

fn rational_coords(field: &NumberField, a: &Nf) -> Vec<Rational> {
    field.coords(a)
}

fn lcm_den(xs: &[Rational]) -> BigInt {
    xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Lattice of `m in Z^l` with `cond * m = 0` (rational rows) and `res * m` integral.
fn admissible_lattice(l: usize, cond: &[Vec<Rational>], res: &[Vec<Rational>]) -> Vec<IntVec> {
    let p = res.len();
    let mut rows: Vec<IntVec> = Vec::new();
    for row in cond {
        let d = lcm_den(row);
        let ints: IntVec = row.iter().map(|x| (x * Rational::from(d.clone())).to_integer()).collect();
        if ints.iter().any(|x| !x.is_zero()) {
            let mut r = ints;
            r.extend(std::iter::repeat_n(BigInt::zero(), p));
            rows.push(r);
        }
    }
    let all: Vec<Rational> = res.iter().flatten().cloned().collect();
    let d = lcm_den(&all);
    for (k, row) in res.iter().enumerate() {
        let mut r: IntVec = row.iter().map(|x| (x * Rational::from(d.clone())).to_integer()).collect();
        r.extend((0..p).map(|i| if i == k { d.clone() } else { BigInt::zero() }));
        rows.push(r);
    }
    if rows.is_empty() {
        return lattice::hnf(&(0..l).map(|i| (0..l).map(|j| BigInt::from(u8::from(i == j))).collect()).collect::<Vec<_>>(), l);
    }
    let ker = lattice::integer_kernel(&rows, l + p);
    let proj: Vec<IntVec> = ker.into_iter().map(|v| v[..l].to_vec()).collect();
    lattice::hnf(&proj, l)
}

fn pivot_columns(h: &[IntVec]) -> Vec<usize> {
    h.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect()
}

fn package(
    l: usize,
    admissible: Vec<IntVec>,
    vs: Vec<HyperexpElement>,
    factors: Vec<KPoly>,
    residues: Vec<Vec<Rational>>,
    constant_only: bool,
) -> RelationLattice {
    let piv = pivot_columns(&admissible);
    let eta: Vec<usize> = (0..l).filter(|j| !piv.contains(j)).collect();
    let mut out = RelationLattice { l, eta: eta.clone(), relations: Vec::new(), admissible: admissible.clone(), vs, factors, residues, constant_only };
    for &j in &piv {
        // reorder columns so that only j survives among the pivots
        let mut order: Vec<usize> = piv.iter().copied().filter(|&c| c != j).collect();
        order.push(j);
        order.extend(eta.iter().copied());
        let permuted: Vec<IntVec> = admissible.iter().map(|r| order.iter().map(|&c| r[c].clone()).collect()).collect();
        let h = lattice::hnf(&permuted, l);
        let pos = piv.len() - 1;
        let row = h.iter().find(|r| r.iter().position(|x| !x.is_zero()) == Some(pos)).expect("pivot row").clone();
        let mut m = vec![BigInt::zero(); l];
        for (k, &c) in order.iter().enumerate() {
            m[c] = row[k].clone();
        }
        let eta_exponents: Vec<(usize, BigInt)> =
            eta.iter().enumerate().filter(|(_, &c)| !m[c].is_zero()).map(|(i, &c)| (i, -m[c].clone())).collect();
        let cofactor = out.cofactor(&m).expect("admissible by construction");
        out.relations.push(Relation { index: j, exponent: m[j].clone(), eta_exponents, cofactor });
    }
    out
}

/// Admissible lattice with cofactors in `k`. Residues must be rational.
pub fn relation_lattice(field: &NumberField, vs: &[HyperexpElement]) -> Result<RelationLattice> {
    let l = vs.len();
    let mut factors: Vec<KPoly> = Vec::new();
    for h in vs {
        for p in &h.poles {
            if !factors.contains(&p.factor) {
                factors.push(p.factor.clone());
            }
        }
    }
    let mut cond: Vec<Vec<Rational>> = Vec::new();
    let deg = field.degree();
    let coord_rows = |get: &dyn Fn(&HyperexpElement) -> Nf, cond: &mut Vec<Vec<Rational>>| {
        let cols: Vec<Vec<Rational>> = vs.iter().map(|h| rational_coords(field, &get(h))).collect();
        for c in 0..deg {
            cond.push(cols.iter().map(|v| v[c].clone()).collect());
        }
    };
    let top = vs.iter().map(|h| h.poly_part.deg_or_zero()).max().unwrap_or(0);
    for e in 0..=top {
        coord_rows(&|h: &HyperexpElement| h.poly_part.coeff(e), &mut cond);
    }
    let mut residues: Vec<Vec<Rational>> = vec![Vec::new(); l];
    for phi in &factors {
        let d = phi.deg_or_zero();
        let maxmult = vs.iter().flat_map(|h| h.poles.iter().filter(|p| &p.factor == phi).map(|p| p.multiplicity)).max().unwrap_or(1);
        for j in 2..=maxmult as usize {
            for e in 0..d {
                coord_rows(
                    &|h: &HyperexpElement| {
                        h.poles.iter().find(|p| &p.factor == phi).and_then(|p| p.parts.get(j - 1)).map_or(Nf::zero(), |a| a.coeff(e))
                    },
                    &mut cond,
                );
            }
        }
        for (k, h) in vs.iter().enumerate() {
            let r = match h.poles.iter().find(|p| &p.factor == phi) {
                None => Rational::zero(),
                Some(p) => p.rational_residue().ok_or_else(|| {
                    DgalError::Unsupported(format!(
                        "v = {} has a non-rational residue at the roots of {}",
                        h.v.render(),
                        phi.render("t")
                    ))
                })?,
            };
            residues[k].push(r);
        }
    }
    let res_rows: Vec<Vec<Rational>> = (0..factors.len()).map(|f| residues.iter().map(|r| r[f].clone()).collect()).collect();
    let adm = admissible_lattice(l, &cond, &res_rows);
    Ok(package(l, adm, vs.to_vec(), factors, residues, false))
}

/// Relations with constant cofactor: the integer kernel of `sum m_j v_j = 0`.
pub fn constant_relations(field: &NumberField, vs: &[HyperexpElement]) -> RelationLattice {
    let l = vs.len();
    // common denominator, then compare numerator coefficients
    let mut den = KPoly::one();
    for h in vs {
        let g = KPoly::gcd(&den, h.v.den());
        den = den.exact_div(&g) * h.v.den().clone();
    }
    let nums: Vec<KPoly> = vs.iter().map(|h| h.v.num().clone() * den.exact_div(h.v.den())).collect();
    let top = nums.iter().map(|p| p.deg_or_zero()).max().unwrap_or(0);
    let mut cond = Vec::new();
    for e in 0..=top {
        let cols: Vec<Vec<Rational>> = nums.iter().map(|p| rational_coords(field, &p.coeff(e))).collect();
        for c in 0..field.degree() {
            cond.push(cols.iter().map(|v| v[c].clone()).collect());
        }
    }
    let adm = admissible_lattice(l, &cond, &[]);
    package(l, adm, vs.to_vec(), Vec::new(), vec![Vec::new(); l], true)
}

/// Identity component of `{y : y^m = 1 for admissible m}` as a diagonal subgroup of `GL_l`
/// (`y_i` is the diagonal entry `x_i_i`).
pub fn torus_from_relations(rl: &RelationLattice, field: &NumberField, cfg: &GbConfig) -> Result<AlgebraicSubgroup> {
    let l = rl.l;
    let ring = Ring::matrix(l);
    let off: Vec<crate::CMultiPoly> = (0..l)
        .flat_map(|i| (0..l).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| MultiPoly::var(&ring, Var::X(i, j)))
        .collect();
    let sat = lattice::saturate(&rl.admissible, l);
    let ideal = if sat.is_empty() {
        crate::algebra::groebner::groebner_basis(&ring, &off, cfg)?
    } else {
        torus_ideal(&ring, l, &sat, &off, cfg)?
    };
    Ok(AlgebraicSubgroup { n: l, field: field.clone(), ideal, group_verified: true, connected: Connected::Yes, finite: None })
}

/// Integer vector helper for callers and tests.
pub fn int_vec(v: &[i64]) -> IntVec {
    lattice::ivec(v)
}
