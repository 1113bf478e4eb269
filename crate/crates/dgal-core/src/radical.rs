//! Matrices with entries `c t^q`, `q` rational: the zeros of relation ideals
//! that are solved in closed form, together with their Kummer conjugates
//! `t^(1/L) -> ζ t^(1/L)`.

use crate::algebra::factor::{factor_over, roots_in};
use crate::algebra::field::{fmt_rational, Rational};
use crate::algebra::groebner::{groebner_basis, GbConfig};
use crate::algebra::multipoly::MonoOrder;
use crate::algebra::numfield::Embedding;
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::series_div;
use crate::ode::TruncSeries;
use crate::relations::RelationIdeal;
use crate::{CMatrix, DgalError, Field, KMultiPoly, KPoly, KRat, Nf, NumberField, Result};
use std::collections::BTreeMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `coeff * t^exp` on the branch that is real and positive for `t > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxMonomial {
    pub coeff: Nf,
    pub exp: Rational,
}

impl PuiseuxMonomial {
    pub fn zero() -> Self {
        PuiseuxMonomial { coeff: Nf::zero(), exp: Rational::zero() }
    }

    pub fn constant(c: Nf) -> Self {
        PuiseuxMonomial { coeff: c, exp: Rational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let c = self.coeff.to_string();
        if self.exp.is_zero() {
            return c;
        }
        let e = if self.exp.is_integer() { fmt_rational(&self.exp) } else { format!("({})", fmt_rational(&self.exp)) };
        if self.coeff.is_one() {
            format!("t^{e}")
        } else {
            format!("({c})*t^{e}")
        }
    }

    /// Series in `u = t - point`. Fractional exponents need `point = 1`.
    pub fn series(&self, point: &Nf, len: usize) -> Result<Vec<Nf>> {
        if self.is_zero() {
            return Ok(vec![Nf::zero(); len]);
        }
        let base: Vec<Nf> = if self.exp.is_integer() {
            let e = self.exp.to_integer().to_i64().expect("small exponent");
            let lin = KPoly::new(vec![point.clone(), Nf::one()]);
            let p = lin.pow(e.unsigned_abs() as u32);
            let mut c = p.coeffs().to_vec();
            c.resize(len.max(c.len()), Nf::zero());
            if e >= 0 {
                c.truncate(len);
                c
            } else {
                let mut one = vec![Nf::zero(); len];
                one[0] = Nf::one();
                series_div(&one, &c, len).ok_or_else(|| DgalError::Invalid("negative power at t = 0".into()))?
            }
        } else {
            if !point.is_one() {
                return Err(DgalError::Unsupported(format!(
                    "series of t^({}) is only taken at t = 1",
                    fmt_rational(&self.exp)
                )));
            }
            // (1 + u)^q
            let q = Nf::from_rational(&self.exp);
            let mut out = Vec::with_capacity(len);
            let mut c = Nf::one();
            for k in 0..len {
                out.push(c.clone());
                c = c * (q.clone() - Nf::from_i64(k as i64)) * Nf::from_i64(k as i64 + 1).inv();
            }
            out
        };
        Ok(base.into_iter().map(|x| x * self.coeff.clone()).collect())
    }
}

/// `n x n` matrix of Puiseux monomials, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RadicalMatrix {
    pub n: usize,
    pub field: NumberField,
    pub entries: Vec<PuiseuxMonomial>,
}

impl RadicalMatrix {
    pub fn identity(n: usize, field: &NumberField) -> Self {
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { PuiseuxMonomial::constant(Nf::one()) } else { PuiseuxMonomial::zero() })
            .collect();
        RadicalMatrix { n, field: field.clone(), entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &PuiseuxMonomial {
        &self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        *self == RadicalMatrix::identity(self.n, &self.field)
    }

    /// Least `L` with every exponent in `(1/L) Z`.
    pub fn ramification(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| !e.is_zero())
            .fold(BigInt::one(), |acc, e| acc.lcm(e.exp.denom()))
            .to_u64()
            .expect("small ramification")
    }

    /// Inverse, for matrices with one nonzero entry per row and column.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut out = vec![PuiseuxMonomial::zero(); n * n];
        let mut seen_cols = vec![false; n];
        for i in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&j| !self.get(i, j).is_zero()).collect();
            if nz.len() != 1 || seen_cols[nz[0]] {
                return None;
            }
            let j = nz[0];
            seen_cols[j] = true;
            let e = self.get(i, j);
            out[j * n + i] = PuiseuxMonomial { coeff: e.coeff.inv(), exp: -e.exp.clone() };
        }
        Some(RadicalMatrix { n, field: self.field.clone(), entries: out })
    }

    pub fn series(&self, point: &Nf, len: usize) -> Result<TruncSeries> {
        let n = self.n;
        let cols: Vec<Vec<Nf>> = self.entries.iter().map(|e| e.series(point, len)).collect::<Result<_>>()?;
        let coeffs = (0..len).map(|k| CMatrix::from_fn(n, n, |i, j| cols[i * n + j][k].clone())).collect();
        Ok(TruncSeries { point: point.clone(), coeffs })
    }

    /// Image under `t^(1/L) -> ζ^j t^(1/L)`, `ζ` a primitive `L`-th root of unity.
    pub fn conjugate(&self, zeta: &Nf, j: u64, big_l: u64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let k = (e.exp.clone() * Rational::from_integer(BigInt::from(big_l))).to_integer();
                let k = (k * BigInt::from(j)).mod_floor(&BigInt::from(big_l)).to_u64().expect("reduced");
                PuiseuxMonomial { coeff: e.coeff.clone() * zeta.pow(k), exp: e.exp.clone() }
            })
            .collect();
        RadicalMatrix { entries, ..self.clone() }
    }

    pub fn map(&self, emb: &Embedding) -> Self {
        let entries = self.entries.iter().map(|e| PuiseuxMonomial { coeff: emb.apply(&e.coeff), exp: e.exp.clone() }).collect();
        RadicalMatrix { n: self.n, field: emb.target.clone(), entries }
    }

    pub fn render(&self) -> Vec<Vec<String>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).render()).collect()).collect()
    }
}

/// Finite sum of Puiseux monomials, keyed by exponent.
type PuiseuxSum = BTreeMap<Rational, Nf>;

fn add_term(sum: &mut PuiseuxSum, exp: Rational, c: Nf) {
    let v = sum.remove(&exp).unwrap_or_else(Nf::zero) + c;
    if !v.is_zero() {
        sum.insert(exp, v);
    }
}

/// `c` as a Laurent polynomial in `t`, if its denominator is a monomial.
fn laurent(c: &KRat) -> Option<PuiseuxSum> {
    let den = c.den();
    let nz: Vec<usize> = (0..den.coeffs().len()).filter(|&k| !den.coeff(k).is_zero()).collect();
    let [shift] = nz[..] else { return None };
    let scale = den.coeff(shift).inv();
    let mut out = PuiseuxSum::new();
    for (k, a) in c.num().coeffs().iter().enumerate().filter(|(_, a)| !a.is_zero()) {
        add_term(&mut out, Rational::from_integer(BigInt::from(k as i64 - shift as i64)), a.clone() * scale.clone());
    }
    Some(out)
}

fn single(sum: &PuiseuxSum) -> Option<PuiseuxMonomial> {
    let mut it = sum.iter();
    match (it.next(), it.next()) {
        (Some((e, c)), None) => Some(PuiseuxMonomial { coeff: c.clone(), exp: e.clone() }),
        _ => None,
    }
}

/// An `m`-th root of `c` in `field`, adjoining one if needed.
fn mth_root(field: &NumberField, c: &Nf, m: u32) -> Result<(Nf, Embedding)> {
    let mut coeffs = vec![Nf::zero(); m as usize + 1];
    coeffs[0] = -c.clone();
    coeffs[m as usize] = Nf::one();
    let p = Poly::new(coeffs);
    let roots = roots_in(field, &p);
    let positive_rational = roots.iter().find(|r| r.as_rational().is_some_and(|q| q.is_positive()));
    if let Some(r) = positive_rational.or(roots.first()) {
        return Ok((r.clone(), field.identity_embedding()));
    }
    let f = factor_over(field, &p)
        .into_iter()
        .map(|(f, _)| f)
        .min_by_key(|f| f.deg_or_zero())
        .expect("nonconstant polynomial has a factor");
    let adj = field.adjoin(&f.monic())?;
    Ok((adj.root, adj.embedding))
}

/// `g` with the assigned entries substituted, as coefficients of powers of entry `k`
/// (or of nothing, when `k` is `None` and every entry is assigned).
fn partial_eval(
    g: &KMultiPoly,
    entries: &[Option<PuiseuxMonomial>],
    k: Option<usize>,
    coeff_map: &dyn Fn(&KRat) -> KRat,
) -> Option<BTreeMap<u32, PuiseuxSum>> {
    let mut out: BTreeMap<u32, PuiseuxSum> = BTreeMap::new();
    for (mono, c) in g.terms() {
        let mut term = laurent(&coeff_map(c))?;
        for (v, &e) in mono.iter().enumerate().filter(|(v, &e)| e > 0 && Some(*v) != k) {
            let x = entries[v].as_ref().expect("assigned entry");
            let (xc, xe) = (x.coeff.pow(e as u64), x.exp.clone() * Rational::from_integer(BigInt::from(e)));
            term = term.into_iter().map(|(te, tc)| (te + xe.clone(), tc * xc.clone())).filter(|(_, c)| !c.is_zero()).collect();
        }
        let slot = out.entry(k.map_or(0, |k| mono[k])).or_default();
        for (e, c) in term {
            add_term(slot, e, c);
        }
    }
    out.retain(|_, s| !s.is_empty());
    Some(out)
}

struct Substitution {
    entries: Vec<Option<PuiseuxMonomial>>,
    field: NumberField,
    /// From the working field into `field`.
    total: Embedding,
}

/// Solve `gens` one entry at a time, preferring equations of low degree in the
/// unknown; each must reduce to `A x^m = B` with `A`, `B` monomials. Leaves
/// entries that no generator pins down unassigned. `Err` carries the reason.
fn back_substitute(gens: &[KMultiPoly], nvars: usize, emb: &Embedding) -> std::result::Result<Substitution, String> {
    let mut field = emb.target.clone();
    let mut entries: Vec<Option<PuiseuxMonomial>> = vec![None; nvars];
    let mut total = field.identity_embedding();
    loop {
        let coeff_map = |c: &KRat| c.map(|x| total.apply(&emb.apply(x)));
        let pending: Vec<&KMultiPoly> =
            gens.iter().filter(|g| g.support_vars().into_iter().any(|v| entries[v].is_none())).collect();
        if pending.is_empty() {
            break;
        }
        // (entry, m, A, B) with A x^m + B = 0
        let solvable = pending.iter().filter_map(|g| {
            let unknown: Vec<usize> = g.support_vars().into_iter().filter(|&v| entries[v].is_none()).collect();
            let [k] = unknown[..] else { return None };
            let parts = partial_eval(g, &entries, Some(k), &coeff_map)?;
            let m = *parts.keys().next_back()?;
            if m == 0 || parts.keys().any(|&j| j != 0 && j != m) {
                return None;
            }
            let a = single(&parts[&m])?;
            let b = match parts.get(&0) {
                Some(s) => Some(single(s)?),
                None => None,
            };
            Some((k, m, a, b))
        });
        let Some((k, m, a, b)) = solvable.min_by_key(|(_, m, _, _)| *m) else {
            return Err(format!("{} is not a binomial in a single unknown entry", pending[0].render()));
        };
        let Some(b) = b else {
            entries[k] = Some(PuiseuxMonomial::zero());
            continue;
        };
        let c0 = -b.coeff / a.coeff;
        let (root, ext) = mth_root(&field, &c0, m).map_err(|e| e.to_string())?;
        if !ext.is_identity() {
            for done in entries.iter_mut().flatten() {
                done.coeff = ext.apply(&done.coeff);
            }
            total = total.then(&ext);
            field = ext.target.clone();
        }
        let exp = (b.exp - a.exp) / Rational::from_integer(BigInt::from(m));
        entries[k] = Some(PuiseuxMonomial { coeff: root, exp });
    }
    Ok(Substitution { entries, field, total })
}

/// A zero of the relation ideal in `GL_n(k̄)` of the form `c t^q` per entry.
///
/// Tries back-substitution on the grevlex basis, then on a lex basis, whose
/// triangular shape always offers an equation in one unknown. The result is
/// checked against every generator.
///
/// `emb` maps the ideal's constant field into the working field; the returned
/// embedding extends the working field when a constant root was adjoined.
pub fn binomial_zero(rel: &RelationIdeal<KRat>, emb: &Embedding, cfg: &GbConfig) -> Result<(RadicalMatrix, Embedding)> {
    let n = rel.n;
    let id: Vec<KRat> = (0..n * n).map(|k| if k / n == k % n { KRat::one() } else { KRat::zero() }).collect();
    if rel.basis.iter().all(|p| p.eval(&id).is_zero()) {
        return Ok((RadicalMatrix::identity(n, &emb.target), emb.target.identity_embedding()));
    }
    let unsupported = |why: String| DgalError::Unsupported(format!("no zero of the relation ideal in the radical class: {why}"));
    let gb = groebner_basis(&rel.ring, &rel.basis, cfg)?;
    let sub = match back_substitute(gb.gens(), n * n, emb) {
        Ok(sub) => sub,
        Err(_) => {
            let lex = groebner_basis(&rel.ring.with_order(MonoOrder::Lex), gb.gens(), cfg)?;
            back_substitute(lex.gens(), n * n, emb).map_err(unsupported)?
        }
    };
    let Substitution { entries, field, total } = sub;
    // entries in no generator are free: take the identity there
    let entries: Vec<PuiseuxMonomial> = entries
        .into_iter()
        .enumerate()
        .map(|(k, e)| e.unwrap_or_else(|| if k / n == k % n { PuiseuxMonomial::constant(Nf::one()) } else { PuiseuxMonomial::zero() }))
        .map(|e| PuiseuxMonomial { coeff: field.attach(e.coeff), ..e })
        .collect();
    let assigned: Vec<Option<PuiseuxMonomial>> = entries.iter().cloned().map(Some).collect();
    let coeff_map = |c: &KRat| c.map(|x| total.apply(&emb.apply(x)));
    for g in gb.gens() {
        match partial_eval(g, &assigned, None, &coeff_map) {
            Some(rest) if rest.is_empty() => {}
            Some(_) => return Err(unsupported(format!("the chosen roots do not satisfy {}", g.render()))),
            None => return Err(unsupported(format!("{} has a coefficient that is not a Laurent polynomial", g.render()))),
        }
    }
    let alpha = RadicalMatrix { n, field: field.clone(), entries };
    if alpha.inverse().is_none() {
        return Err(unsupported("the solution is not a monomial matrix".into()));
    }
    Ok((alpha, total))
}

/// A primitive `L`-th root of unity, adjoined if necessary.
pub fn root_of_unity(field: &NumberField, big_l: u64) -> Result<(Nf, Embedding)> {
    match big_l {
        1 => return Ok((Nf::one(), field.identity_embedding())),
        2 => return Ok((-Nf::one(), field.identity_embedding())),
        _ => {}
    }
    let xl = |d: u64| {
        let mut c = vec![Nf::zero(); d as usize + 1];
        c[0] = -Nf::one();
        c[d as usize] = Nf::one();
        Poly::new(c)
    };
    let proper: Vec<u64> = (1..big_l).filter(|d| big_l.is_multiple_of(*d)).collect();
    let primitive = |f: &Poly<Nf>| proper.iter().all(|&d| Poly::gcd(f, &xl(d)).deg_or_zero() == 0);
    let factors: Vec<Poly<Nf>> = factor_over(field, &xl(big_l)).into_iter().map(|(f, _)| f.monic()).filter(primitive).collect();
    let f = factors.into_iter().min_by_key(|f| f.deg_or_zero()).expect("cyclotomic factor");
    if f.degree() == Some(1) {
        return Ok((-f.coeff(0), field.identity_embedding()));
    }
    let adj = field.adjoin(&f)?;
    Ok((adj.root, adj.embedding))
}
