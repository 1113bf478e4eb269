//! The whole algorithm: proto-Galois group, identity component through the
//! hyperexponential relations among character values, and the finite part
//! assembled over the Kummer conjugates of `α`.

use crate::algebra::groebner::{groebner_basis, GbConfig};
use crate::algebra::linalg::EchelonBasis;
use crate::algebra::multipoly::{Mono, MultiPoly, Ring};
use crate::algebra::numfield::Embedding;
use crate::algebra::zerodim::solve_zero_dimensional;
use crate::bounds::proto_galois_degree_bound;
use crate::groups::{
    characters_generators, det_poly, identity_component, kernel_of_characters, stabilizer_group, verify_group_axioms,
    AlgebraicSubgroup, Character, ComponentClass, Connected, FinitePoints, GroupDoc,
};
use crate::hyperexp::{logderiv_from_character, relation_lattice, HyperexpElement, RelationLattice};
use crate::ode::{OdeSystem, TruncSeries};
use crate::radical::{binomial_zero, root_of_unity, RadicalMatrix};
use crate::relations::{MonomialSeries, OrderStrategy, RelationConfig, RelationIdeal};
use crate::{CMatrix, CMultiPoly, DgalError, Field, KRat, Nf, NumberField, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Arc;

/// Which degree bound drives the relation computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeMode {
    /// The full proto-Galois bound; never executable, reported symbolically.
    FullBound,
    /// A user-chosen degree; results hold relative to it.
    Override(u32),
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub degree: DegreeMode,
    /// Common base point for `F`, `F̄`, `F̃`; chosen automatically when `None`.
    pub point: Option<Nf>,
    pub coeff_degree: usize,
    pub strategy: OrderStrategy,
    /// Degree of the character ansatz.
    pub character_degree: u32,
    /// Degree cap for reconstructing log-derivatives.
    pub hyperexp_degree: usize,
    pub gb: GbConfig,
}

impl PipelineConfig {
    pub fn with_degree(d: u32) -> Self {
        PipelineConfig {
            degree: DegreeMode::Override(d),
            point: None,
            coeff_degree: 1,
            strategy: OrderStrategy::default(),
            character_degree: 2,
            hyperexp_degree: 4,
            gb: GbConfig::default(),
        }
    }

    pub fn full_bound() -> Self {
        PipelineConfig { degree: DegreeMode::FullBound, ..Self::with_degree(1) }
    }

    fn executable_degree(&self, n: usize) -> Result<u32> {
        match self.degree {
            DegreeMode::Override(0) => Err(DgalError::Invalid("degree override must be at least 1".into())),
            DegreeMode::Override(d) => Ok(d),
            DegreeMode::FullBound => Err(DgalError::BoundNotExecutable { tower: proto_galois_degree_bound(n as u32).tower() }),
        }
    }
}

/// First regular point among `1, 2, 3, -1, -2, 0, 4, ...`.
pub fn choose_point(sys: &OdeSystem) -> Nf {
    [1i64, 2, 3, -1, -2, 0]
        .into_iter()
        .chain(4..)
        .map(Nf::from_i64)
        .find(|a| sys.is_regular(a))
        .expect("a rational function has finitely many poles")
}

#[derive(Clone, Debug)]
pub struct ProtoGalois {
    pub point: Nf,
    pub relations: RelationIdeal<KRat>,
    pub group: AlgebraicSubgroup,
    /// Fundamental matrix at `point`, normalized to `I` there.
    pub gamma: TruncSeries,
}

/// Relations of degree `<= d`, their stabilizer `H_F`, and the verified group axioms.
pub fn proto_galois(sys: &OdeSystem, cfg: &PipelineConfig) -> Result<ProtoGalois> {
    let d = cfg.executable_degree(sys.n())?;
    let point = cfg.point.clone().unwrap_or_else(|| choose_point(sys));
    sys.check_regular(&point)?;
    let rcfg = RelationConfig::new(d).with_coeff_degree(cfg.coeff_degree).with_strategy(cfg.strategy);
    let relations = crate::relations::relation_ideal(sys, &point, &rcfg).map_err(|e| e.in_stage("relations"))?;
    let mut group = stabilizer_group(&relations, &cfg.gb).map_err(|e| e.in_stage("stabilizer"))?;
    verify_group_axioms(&mut group, Some(&relations)).map_err(|e| e.in_stage("group axioms"))?;
    let order = (relations.bound.order + 10).max(2 * cfg.hyperexp_degree + 12);
    let gamma = sys.fundamental_series(&point, order)?;
    Ok(ProtoGalois { point, relations, group, gamma })
}

/// Series of `P(S)` for constant-coefficient `P`.
pub fn const_poly_series(p: &CMultiPoly, s: &TruncSeries, len: usize) -> Vec<Nf> {
    let mut ms = MonomialSeries::new(s, len);
    let mut acc = vec![Nf::zero(); len];
    for (m, c) in p.terms() {
        acc.iter_mut().zip(ms.get(m)).for_each(|(a, b)| *a = a.clone() + c.clone() * b);
    }
    acc
}

/// Does `S` lie in the group through its full truncation?
pub fn series_in_group(h: &AlgebraicSubgroup, s: &TruncSeries) -> bool {
    let len = s.coeffs.len();
    h.generators().iter().all(|g| const_poly_series(g, s, len).iter().all(|c| c.is_zero()))
}

/// `α`, the base change `h` with `F̄ = F h`, and `S = α^{-1} F̄`.
#[derive(Clone, Debug)]
pub struct AlphaData {
    pub alpha: RadicalMatrix,
    pub h: CMatrix,
    pub fbar: TruncSeries,
    pub reduced: TruncSeries,
}

/// `h = α(b)` puts the constant term of `α^{-1} F_b h` at the identity, which lies in `H°`.
pub fn find_alpha_fbar(alpha: &RadicalMatrix, gamma: &TruncSeries, hc: &AlgebraicSubgroup) -> Result<AlphaData> {
    let len = gamma.coeffs.len();
    let inv = alpha.inverse().ok_or_else(|| DgalError::Unsupported("alpha is not invertible in the radical class".into()))?;
    let h = alpha.series(&gamma.point, 1)?.coeffs[0].clone();
    let fbar = gamma.mul_const(&h);
    let reduced = TruncSeries { point: gamma.point.clone(), coeffs: TruncSeries::mul_coeffs(&inv.series(&gamma.point, len)?.coeffs, &fbar.coeffs, len) };
    if !series_in_group(hc, &reduced) {
        return Err(DgalError::Verification("alpha^-1 F-bar does not lie in the identity component of H".into()));
    }
    Ok(AlphaData { alpha: alpha.clone(), h, fbar, reduced })
}

/// `χ_a^{m} = prod χ_b^{m_b}` with both sides cleared of negative exponents.
fn character_binomial(ring: &Arc<Ring>, n: usize, chars: &[Character], exps: &[(usize, BigInt)]) -> CMultiPoly {
    let det = det_poly::<Nf>(ring, n);
    let (mut lhs, mut rhs) = (MultiPoly::one(ring), MultiPoly::one(ring));
    let (mut dl, mut dr) = (0u32, 0u32);
    for (k, e) in exps {
        let p = e.abs().to_u32().expect("small exponent");
        let ch = &chars[*k];
        if e.is_positive() {
            lhs = &lhs * &ch.poly.pow(p);
            dl += ch.det_power * p;
        } else {
            rhs = &rhs * &ch.poly.pow(p);
            dr += ch.det_power * p;
        }
    }
    // lhs / det^dl = rhs / det^dr
    &lhs * &det.pow(dr) - &rhs * &det.pow(dl)
}

/// `χ_j^{m_j} = prod χ_η^{m_{i,j}}`, one binomial per lattice relation.
fn character_binomials(hc: &AlgebraicSubgroup, chars: &[Character], rl: &RelationLattice) -> Vec<CMultiPoly> {
    rl.relations
        .iter()
        .map(|r| {
            let mut exps = vec![(r.index, r.exponent.clone())];
            exps.extend(r.eta_exponents.iter().map(|(i, e)| (rl.eta[*i], -e.clone())));
            character_binomial(hc.ring(), hc.n, chars, &exps)
        })
        .collect()
}

type TruncatedMul<'a> = dyn Fn(&[CMultiPoly], &[CMultiPoly]) -> Vec<CMultiPoly> + 'a;

/// Coefficients `0..terms` of `Q(S g)` for each `Q`, as polynomials in the entries of `g`.
fn coset_equations(qs: &[CMultiPoly], s: &TruncSeries, terms: usize) -> Vec<CMultiPoly> {
    let n = s.nrows();
    let ring = Ring::matrix(n);
    let terms = terms.min(s.coeffs.len());
    // entries of S g, one linear polynomial per order
    let entries: Vec<Vec<CMultiPoly>> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            (0..terms)
                .map(|o| {
                    (0..n).fold(MultiPoly::zero(&ring), |acc, l| {
                        let c = &s.coeffs[o][(i, l)];
                        if c.is_zero() {
                            acc
                        } else {
                            acc + MultiPoly::var_at(&ring, l * n + j).scale(c)
                        }
                    })
                })
                .collect()
        })
        .collect();
    let mul = |a: &[CMultiPoly], b: &[CMultiPoly]| -> Vec<CMultiPoly> {
        (0..terms)
            .map(|k| {
                (0..=k).fold(MultiPoly::zero(&ring), |acc, i| {
                    if a[i].is_zero() || b[k - i].is_zero() {
                        acc
                    } else {
                        acc + &a[i] * &b[k - i]
                    }
                })
            })
            .collect()
    };
    let mut cache: HashMap<Mono, Vec<CMultiPoly>> = HashMap::new();
    fn mono_series(
        m: &Mono,
        entries: &[Vec<CMultiPoly>],
        ring: &Arc<Ring>,
        terms: usize,
        cache: &mut HashMap<Mono, Vec<CMultiPoly>>,
        mul: &TruncatedMul,
    ) -> Vec<CMultiPoly> {
        if let Some(s) = cache.get(m) {
            return s.clone();
        }
        let out = match m.iter().position(|&e| e > 0) {
            None => (0..terms).map(|k| if k == 0 { MultiPoly::one(ring) } else { MultiPoly::zero(ring) }).collect(),
            Some(k) => {
                let mut rest = m.clone();
                rest[k] -= 1;
                let r = mono_series(&rest, entries, ring, terms, cache, mul);
                mul(&r, &entries[k])
            }
        };
        cache.insert(m.clone(), out.clone());
        out
    }
    let mut eqs = Vec::new();
    for q in qs {
        let mut acc: Vec<CMultiPoly> = vec![MultiPoly::zero(&ring); terms];
        for (m, c) in q.terms() {
            let ms = mono_series(m, &entries, &ring, terms, &mut cache, &mul);
            for (a, b) in acc.iter_mut().zip(ms) {
                *a = &*a + &b.scale(c);
            }
        }
        eqs.extend(acc.into_iter().filter(|p| !p.is_zero()));
    }
    compress(&ring, eqs)
}

/// A basis of the linear span of the polynomials.
fn compress(ring: &Arc<Ring>, polys: Vec<CMultiPoly>) -> Vec<CMultiPoly> {
    let mut monos: Vec<Mono> = polys.iter().flat_map(|p| p.terms().iter().map(|(m, _)| m.clone())).collect();
    monos.sort_by(|a, b| ring.order().cmp(b, a));
    monos.dedup();
    let index: HashMap<&Mono, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = EchelonBasis::new(monos.len());
    for p in &polys {
        let mut v = vec![Nf::zero(); monos.len()];
        for (m, c) in p.terms() {
            v[index[m]] = c.clone();
        }
        ech.insert(v);
    }
    ech.rows()
        .map(|row| MultiPoly::from_terms(ring, monos.iter().cloned().zip(row.iter().cloned()).filter(|(_, c)| !c.is_zero()).collect()))
        .collect()
}

/// One piece `Zero(𝒮_τ)` of the final group.
#[derive(Clone, Debug, Serialize)]
pub struct Coset {
    /// `τ` sends `t^(1/L)` to `ζ^j t^(1/L)`.
    pub conjugate: u64,
    pub generators: Vec<String>,
    /// Points, when the identity component is trivial.
    pub points: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sandwich {
    /// Generators of `(H°)^t`, the common kernel of the characters of `H°`.
    pub lower: Vec<String>,
    pub lower_in_identity_component: bool,
    pub identity_component_in_proto: bool,
}

/// The computed group and how it was obtained.
#[derive(Clone, Debug, Serialize)]
pub struct GaloisGroupDescription {
    pub n: usize,
    /// All statements hold relative to this relation degree.
    pub relative_to_degree: u32,
    pub point: String,
    /// Constant field of the final answer, as a minimal polynomial in `g`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub rigorous: bool,
    pub relations: Vec<String>,
    pub proto_group: GroupDoc,
    pub identity_component: GroupDoc,
    pub component_class: String,
    pub dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub short_circuit: bool,
    pub characters: Vec<String>,
    pub log_derivatives: Vec<String>,
    pub hyperexp_relations: Vec<String>,
    pub alpha: Vec<Vec<String>>,
    pub h: Vec<Vec<String>>,
    pub ramification: u64,
    pub cosets: Vec<Coset>,
    pub sandwich: Sandwich,
    #[serde(skip)]
    pub galois_identity: Option<AlgebraicSubgroup>,
    #[serde(skip)]
    pub galois_points: Option<FinitePoints>,
    #[serde(skip)]
    pub proto: Option<AlgebraicSubgroup>,
}

impl GaloisGroupDescription {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

fn render_matrix(m: &CMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()
}

/// Everything that must move when the constant field grows.
struct Stage {
    /// From the field of the system into the current field.
    emb: Embedding,
    proto: AlgebraicSubgroup,
    hc: AlgebraicSubgroup,
    lower: AlgebraicSubgroup,
    chars: Vec<Character>,
}

impl Stage {
    fn extend(&mut self, ext: &Embedding) {
        if ext.is_identity() {
            return;
        }
        self.emb = self.emb.then(ext);
        self.proto = self.proto.extend(ext);
        self.hc = self.hc.extend(ext);
        self.lower = self.lower.extend(ext);
        self.chars = self.chars.iter().map(|c| Character { poly: c.poly.map(|x| ext.apply(x)), det_power: c.det_power }).collect();
    }

    fn field(&self) -> NumberField {
        self.emb.target.clone()
    }
}

impl AlphaData {
    fn map(&self, ext: &Embedding) -> AlphaData {
        AlphaData {
            alpha: self.alpha.map(ext),
            h: self.h.map(|c| ext.apply(c)),
            fbar: self.fbar.map_field(ext),
            reduced: self.reduced.map_field(ext),
        }
    }
}

/// Sandwich `(H°)^t ⊆ 𝒢° ⊆ H` by ideal containment; a failure is an error.
fn check_sandwich(lower: &AlgebraicSubgroup, g0: &AlgebraicSubgroup, proto: &AlgebraicSubgroup) -> Result<Sandwich> {
    let sw = Sandwich {
        lower: lower.render(),
        lower_in_identity_component: lower.is_subgroup_of(g0),
        identity_component_in_proto: g0.is_subgroup_of(proto),
    };
    if !sw.lower_in_identity_component || !sw.identity_component_in_proto {
        return Err(DgalError::Verification(format!(
            "sandwich check failed: (H°)^t in G° {}, G° in H {}",
            sw.lower_in_identity_component, sw.identity_component_in_proto
        )));
    }
    Ok(sw)
}

fn field_doc(field: &NumberField) -> Option<String> {
    (!field.is_rationals()).then(|| field.minpoly().render("g"))
}

/// Steps from the proto-Galois group to the final description.
pub fn galois_group(sys: &OdeSystem, cfg: &PipelineConfig) -> Result<GaloisGroupDescription> {
    let degree = cfg.executable_degree(sys.n())?;
    let proto = proto_galois(sys, cfg)?;
    let gb = &cfg.gb;
    let n = sys.n();
    let ic = identity_component(&proto.group, gb).map_err(|e| e.in_stage("identity component"))?;
    let trivial_hc = ic.class == ComponentClass::Finite;
    let mut stage = Stage {
        emb: sys.field().identity_embedding(),
        proto: proto.group.clone(),
        hc: proto.group.clone(),
        lower: proto.group.clone(),
        chars: Vec::new(),
    };
    stage.extend(&ic.embedding);
    stage.hc = ic.group.clone();
    stage.lower = ic.group.clone();

    // characters of H° and their common kernel (H°)^t
    if !trivial_hc {
        let cs = characters_generators(&stage.hc, cfg.character_degree, gb).map_err(|e| e.in_stage("characters"))?;
        stage.extend(&cs.embedding);
        let all: Vec<Character> = cs.all.iter().filter(|c| !c.is_trivial()).cloned().collect();
        if !all.is_empty() {
            let field = stage.field();
            stage.lower = kernel_of_characters(&stage.hc, &all, &field.identity_embedding(), gb).map_err(|e| e.in_stage("character kernel"))?;
        }
        stage.chars = cs.generators.iter().filter(|c| !c.is_trivial()).cloned().collect();
    }
    let base = GaloisGroupDescription {
        n,
        relative_to_degree: degree,
        point: proto.point.to_string(),
        field: None,
        rigorous: proto.relations.bound.rigorous,
        relations: proto.relations.render(),
        proto_group: proto.group.to_doc(),
        identity_component: stage.hc.to_doc(),
        component_class: String::new(),
        dimension: 0,
        component_count: None,
        order: None,
        short_circuit: false,
        characters: stage.chars.iter().map(|c| c.render()).collect(),
        log_derivatives: Vec::new(),
        hyperexp_relations: Vec::new(),
        alpha: Vec::new(),
        h: Vec::new(),
        ramification: 1,
        cosets: Vec::new(),
        sandwich: Sandwich { lower: Vec::new(), lower_in_identity_component: false, identity_component_in_proto: false },
        galois_identity: None,
        galois_points: None,
        proto: None,
    };

    // connected H without characters: (H°)^t = H, so the group is H itself
    if ic.component_count == Some(1) && stage.chars.is_empty() {
        let h = stage.proto.clone();
        let sandwich = check_sandwich(&stage.lower, &h, &h)?;
        let field = stage.field();
        return Ok(GaloisGroupDescription {
            field: field_doc(&field),
            identity_component: h.to_doc(),
            component_class: "short_circuit".into(),
            dimension: h.dimension(),
            component_count: Some(1),
            order: trivial_hc.then_some(1),
            short_circuit: true,
            alpha: RadicalMatrix::identity(n, &field).render(),
            h: render_matrix(&CMatrix::identity(n)),
            cosets: vec![Coset { conjugate: 0, generators: h.render(), points: Vec::new() }],
            sandwich,
            galois_identity: Some(h.clone()),
            galois_points: ic.points.clone().filter(|_| trivial_hc),
            proto: Some(h),
            ..base
        });
    }

    // α with α^{-1} F̄ in H°
    let (alpha, ext) = binomial_zero(&proto.relations, &stage.emb, gb).map_err(|e| e.in_stage("alpha search"))?;
    stage.extend(&ext);
    let gamma = proto.gamma.map_field(&stage.emb);
    let mut ad = find_alpha_fbar(&alpha, &gamma, &stage.hc).map_err(|e| e.in_stage("alpha search"))?;

    // hyperexponential relations among the character values
    let field = stage.field();
    let vs: Vec<HyperexpElement> = stage
        .chars
        .iter()
        .map(|ch| logderiv_from_character(ch, &ad.reduced, &field, cfg.hyperexp_degree))
        .collect::<Result<_>>()
        .map_err(|e| e.in_stage("log-derivatives"))?;
    let mut binomials = Vec::new();
    if !vs.is_empty() {
        let rl = relation_lattice(&field, &vs).map_err(|e| e.in_stage("relation lattice"))?;
        for r in &rl.relations {
            if !rl.verify(r) {
                return Err(DgalError::Verification("hyperexponential relation fails the log-derivative identity".into()));
            }
            if !r.cofactor.is_one() {
                return Err(DgalError::Unsupported(format!(
                    "beta search: a relation with cofactor {} needs a beta other than alpha",
                    r.cofactor
                )));
            }
        }
        binomials = character_binomials(&stage.hc, &stage.chars, &rl);
    }
    let (mut g0, class) = if binomials.is_empty() {
        let mut g = stage.hc.clone();
        g.connected = Connected::Yes;
        (g, ic.class)
    } else {
        let mut gens = stage.hc.generators().to_vec();
        gens.extend(binomials.iter().cloned());
        let mut hbar = AlgebraicSubgroup::from_generators(n, &field, &gens, gb).map_err(|e| e.in_stage("H-bar"))?;
        verify_group_axioms(&mut hbar, None).map_err(|e| e.in_stage("H-bar"))?;
        let hic = identity_component(&hbar, gb).map_err(|e| e.in_stage("identity component of H-bar"))?;
        stage.extend(&hic.embedding);
        ad = ad.map(&hic.embedding);
        (hic.group, hic.class)
    };

    // β = α and F̃ = F̄
    if !series_in_group(&g0, &ad.reduced) {
        return Err(DgalError::Unsupported("beta search: alpha^-1 F-bar is outside the identity component of H-bar".into()));
    }

    // finite part over the conjugates t^(1/L) -> ζ^j t^(1/L)
    let big_l = ad.alpha.ramification();
    let (zeta, ext) = root_of_unity(&stage.field(), big_l)?;
    stage.extend(&ext);
    g0 = g0.extend(&ext);
    ad = ad.map(&ext);
    let field = stage.field();
    let terms = proto.relations.bound.order + 2;
    let len = ad.fbar.coeffs.len();
    let finite = trivial_group(&g0);
    let mut cosets: Vec<Coset> = Vec::new();
    let mut points: Vec<CMatrix> = Vec::new();
    for j in 0..big_l {
        let beta_inv = ad.alpha.conjugate(&zeta, j, big_l).inverse().expect("conjugate of an invertible monomial matrix");
        let coeffs = TruncSeries::mul_coeffs(&beta_inv.series(&ad.fbar.point, len)?.coeffs, &ad.fbar.coeffs, len);
        let s = TruncSeries { point: ad.fbar.point.clone(), coeffs };
        let eqs = coset_equations(g0.generators(), &s, terms);
        if finite {
            let pts: Vec<CMatrix> = match solve_zero_dimensional(&field, &eqs, gb) {
                Ok(sol) if sol.embedding.is_identity() => sol
                    .points
                    .iter()
                    .map(|p| CMatrix::from_fn(n, n, |a, b| p[a * n + b].clone()))
                    .filter(|m| !m.det().is_zero())
                    .collect(),
                Ok(_) => return Err(DgalError::Unsupported("finite part: coset points need a further field extension".into())),
                Err(e) => return Err(e.into()),
            };
            cosets.push(Coset { conjugate: j, generators: Vec::new(), points: pts.iter().map(render_matrix).collect() });
            for p in pts {
                if !points.contains(&p) {
                    points.push(p);
                }
            }
        } else {
            let ideal = groebner_basis(&Ring::matrix(n), &eqs, gb)?;
            let gens: Vec<String> = ideal.gens().iter().map(|g| g.render()).collect();
            if !cosets.iter().any(|c| c.generators == gens) {
                cosets.push(Coset { conjugate: j, generators: gens, points: Vec::new() });
            }
        }
    }
    if finite {
        if !points.contains(&CMatrix::identity(n)) {
            return Err(DgalError::Verification("the identity is missing from the finite part".into()));
        }
        if points.iter().any(|a| points.iter().any(|b| !points.contains(&(a * b)))) {
            return Err(DgalError::Verification("the finite part is not closed under products".into()));
        }
        if let Some(p) = points.iter().find(|p| !stage.proto.contains_matrix(p)) {
            return Err(DgalError::Verification(format!("group element {:?} lies outside H", render_matrix(p))));
        }
    } else if !g0.contains_identity() {
        return Err(DgalError::Verification("identity component misses the identity".into()));
    }
    let sandwich = check_sandwich(&stage.lower, &g0, &stage.proto)?;
    let order = finite.then_some(points.len());
    Ok(GaloisGroupDescription {
        field: field_doc(&field),
        identity_component: g0.to_doc(),
        component_class: serde_json::to_value(class).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        dimension: g0.dimension(),
        component_count: order.or(Some(cosets.len())),
        order,
        log_derivatives: vs.iter().map(|v| v.v.to_string()).collect(),
        hyperexp_relations: binomials.iter().map(|b| b.render()).collect(),
        alpha: ad.alpha.render(),
        h: render_matrix(&ad.h),
        ramification: big_l,
        cosets,
        sandwich,
        galois_identity: Some(g0),
        galois_points: finite.then(|| FinitePoints { field: field.clone(), points }),
        proto: Some(stage.proto),
        ..base
    })
}

fn trivial_group(g: &AlgebraicSubgroup) -> bool {
    g.same_ideal(&AlgebraicSubgroup::trivial(g.n, &g.field))
}
