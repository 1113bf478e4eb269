//! Subspaces of solution spaces cut out by matrices over `k`.
//!
//! A subspace spanned by series vectors `w_1..w_m` is `k`-definable when some
//! invertible `M` over `k` sends the basis to `(W̃; 0)`. We find `M` by choosing
//! `m` independent rows `W̃`, expanding `W̄ W̃^{-1}` and recovering its entries by
//! Padé reconstruction.

use crate::algebra::groebner::GbConfig;
use crate::algebra::linalg::EchelonBasis;
use crate::algebra::multipoly::{monomials_upto, MultiPoly};
use crate::algebra::numfield::NumberField;
use crate::algebra::pade::stable_reconstruction;
use crate::algebra::zerodim::solve_zero_dimensional;
use crate::algebra::AlgebraError;
use crate::groups::{group_points_finite, stabilizer_group, AlgebraicSubgroup};
use crate::ode::{det_series, series_mul, TruncSeries};
use crate::relations::{poly_series, RelationIdeal};
use crate::{CMatrix, DgalError, Field, KMatrix, KPoly, KRat, Nf, Result};
use num_traits::{One, Zero};

/// A vector of scalar series at a common point.
pub type SeriesVector = Vec<Vec<Nf>>;

/// `M` together with the rows chosen for `W̃`.
#[derive(Clone, Debug)]
pub struct DefiningMatrix {
    /// Rows of the ambient space forming `W̃`, in order; the rest follow.
    pub pivot_rows: Vec<usize>,
    /// `W̄ W̃^{-1}`, one row per non-pivot row.
    pub mbar: Vec<Vec<KRat>>,
    /// The full `M`, including the row permutation.
    pub matrix: KMatrix,
    pub degree: usize,
}

impl DefiningMatrix {
    /// Linear constraints `w_r = sum_j mbar[r][j] w_{pivot_j}` as strings.
    pub fn render(&self, ambient: usize) -> Vec<String> {
        let others: Vec<usize> = (0..ambient).filter(|r| !self.pivot_rows.contains(r)).collect();
        others
            .iter()
            .zip(&self.mbar)
            .map(|(r, row)| {
                let rhs: Vec<String> = row
                    .iter()
                    .zip(&self.pivot_rows)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, p)| format!("({})*w{}", c.render(), p + 1))
                    .collect();
                let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
                format!("w{} = {rhs}", r + 1)
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct DefinableSubspace {
    pub ambient: usize,
    pub field: NumberField,
    pub point: Nf,
    pub basis: Vec<SeriesVector>,
    pub defining: Option<DefiningMatrix>,
    /// Degree cap used for the reconstruction.
    pub degree_bound: Option<usize>,
}

impl DefinableSubspace {
    pub fn new(field: &NumberField, point: &Nf, basis: Vec<SeriesVector>) -> Result<Self> {
        let ambient = basis.first().map(|v| v.len()).ok_or_else(|| DgalError::Invalid("empty basis".into()))?;
        if basis.iter().any(|v| v.len() != ambient) {
            return Err(DgalError::Invalid("basis vectors of different lengths".into()));
        }
        Ok(DefinableSubspace { ambient, field: field.clone(), point: point.clone(), basis, defining: None, degree_bound: None })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Shortest series length among the basis entries.
    pub fn series_len(&self) -> usize {
        self.basis.iter().flatten().map(|s| s.len()).min().unwrap_or(0)
    }

    /// Compute and store the defining matrix with entries of degree `<= ell`.
    pub fn define(&mut self, ell: usize) -> Result<&DefiningMatrix> {
        let dm = defining_matrix(&self.basis, &self.point, ell)?;
        self.defining = Some(dm);
        self.degree_bound = Some(ell);
        Ok(self.defining.as_ref().expect("just set"))
    }
}

fn valuation(s: &[Nf]) -> Option<usize> {
    s.iter().position(|c| !c.is_zero())
}

/// Rank over the Laurent series field, by elimination with minimal-valuation pivots.
fn series_rank(rows: &[&SeriesVector], len: usize) -> usize {
    let mut m: Vec<Vec<Vec<Nf>>> = rows.iter().map(|r| r.iter().map(|s| s[..len].to_vec()).collect()).collect();
    let mut rank = 0;
    let mut used_cols = vec![false; m.first().map_or(0, |r| r.len())];
    let mut used_rows = vec![false; m.len()];
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().filter(|(i, _)| !used_rows[*i]) {
            for (j, s) in row.iter().enumerate().filter(|(j, _)| !used_cols[*j]) {
                if let Some(v) = valuation(s) {
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, v)) = best else { return rank };
        rank += 1;
        used_rows[pi] = true;
        used_cols[pj] = true;
        let prec = len - v;
        let piv: Vec<Nf> = m[pi][pj][v..].to_vec();
        for i in 0..m.len() {
            if used_rows[i] {
                continue;
            }
            // every entry has valuation >= v, so the quotient is a power series
            let num: Vec<Nf> = m[i][pj].iter().skip(v).cloned().chain(std::iter::repeat(Nf::zero())).take(prec).collect();
            let q = crate::algebra::ratfunc::series_div(&num, &piv, prec).expect("pivot has nonzero constant term");
            for j in 0..m[i].len() {
                let sub = series_mul(&q, &m[pi][j], prec);
                for (x, y) in m[i][j].iter_mut().zip(sub) {
                    *x = x.clone() - y;
                }
                m[i][j][prec..len].fill(Nf::zero());
            }
        }
    }
}

/// Matrix `M` over `k` with `M (w_1..w_m) = (W̃; 0)`, entries of degree `<= ell`.
/// Refuses with [`DgalError::Unsupported`] when reconstruction does not stabilize.
pub fn defining_matrix(basis: &[SeriesVector], point: &Nf, ell: usize) -> Result<DefiningMatrix> {
    let m = basis.len();
    let ambient = basis.first().map_or(0, |v| v.len());
    let len = basis.iter().flatten().map(|s| s.len()).min().unwrap_or(0);
    let need = 2 * ell + m + 4;
    if len < need {
        return Err(DgalError::Margin { have: len, need });
    }
    // rows as vectors over the basis index
    let rows: Vec<SeriesVector> = (0..ambient).map(|r| basis.iter().map(|w| w[r][..len].to_vec()).collect()).collect();
    let mut pivot_rows = Vec::new();
    for r in 0..ambient {
        if pivot_rows.len() == m {
            break;
        }
        let mut cand: Vec<&SeriesVector> = pivot_rows.iter().map(|&p| &rows[p]).collect();
        cand.push(&rows[r]);
        if series_rank(&cand, len) == cand.len() {
            pivot_rows.push(r);
        }
    }
    if pivot_rows.len() < m {
        return Err(DgalError::Invalid("basis vectors are linearly dependent".into()));
    }
    let wt: Vec<SeriesVector> = pivot_rows.iter().map(|&p| rows[p].clone()).collect();
    let det = det_series(&wt, len);
    let v = valuation(&det).ok_or_else(|| DgalError::Margin { have: len, need: len + 1 })?;
    let unit = &det[v..];
    let prec = len - v;
    if prec < 2 * (ell + v) + 4 {
        return Err(DgalError::Margin { have: len, need: 2 * (ell + v) + 4 + v });
    }
    let adj = adjugate(&wt, len);
    let others: Vec<usize> = (0..ambient).filter(|r| !pivot_rows.contains(r)).collect();
    let shift = KPoly::linear_root(point.clone()).pow(v as u32);
    let mut mbar = Vec::new();
    for &r in &others {
        let mut out_row = Vec::new();
        for j in 0..m {
            // (W̄ adj(W̃))_{rj} / det
            let mut num = vec![Nf::zero(); len];
            for (w, adj_row) in rows[r].iter().zip(&adj) {
                let p = series_mul(w, &adj_row[j], len);
                num.iter_mut().zip(p).for_each(|(a, b)| *a = a.clone() + b);
            }
            let scaled = crate::algebra::ratfunc::series_div(&num[..prec], unit, prec).expect("unit");
            let rf = stable_reconstruction(&scaled, point, ell + v)
                .ok_or_else(|| DgalError::Unsupported(format!("subspace is not k-definable with coefficient degree {ell}")))?;
            let entry = rf * KRat::new(KPoly::one(), shift.clone());
            if entry.num().deg_or_zero() > ell || entry.den().deg_or_zero() > ell {
                return Err(DgalError::Unsupported(format!("subspace is not k-definable with coefficient degree {ell}")));
            }
            out_row.push(entry);
        }
        mbar.push(out_row);
    }
    let degree = mbar.iter().flatten().map(|e| e.num().deg_or_zero().max(e.den().deg_or_zero())).max().unwrap_or(0);
    let dm = DefiningMatrix { matrix: assemble(ambient, &pivot_rows, &others, &mbar), pivot_rows, mbar, degree };
    verify_defining(&dm, &rows, &others, point, len)?;
    Ok(dm)
}

fn adjugate(w: &[SeriesVector], len: usize) -> Vec<SeriesVector> {
    let m = w.len();
    if m == 1 {
        let mut one = vec![Nf::zero(); len];
        one[0] = Nf::one();
        return vec![vec![one]];
    }
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    // adj[i][j] = (-1)^(i+j) minor(j, i)
                    let minor: Vec<SeriesVector> = (0..m)
                        .filter(|&r| r != j)
                        .map(|r| (0..m).filter(|&c| c != i).map(|c| w[r][c].clone()).collect())
                        .collect();
                    let d = det_series(&minor, len);
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        d.into_iter().map(|c| -c).collect()
                    }
                })
                .collect()
        })
        .collect()
}

/// `[[I, 0], [-M̄, I]]` composed with the permutation bringing pivot rows first.
fn assemble(ambient: usize, pivots: &[usize], others: &[usize], mbar: &[Vec<KRat>]) -> KMatrix {
    let mut out = KMatrix::zeros(ambient, ambient);
    for (i, &p) in pivots.iter().enumerate() {
        out[(i, p)] = KRat::one();
    }
    for (i, &r) in others.iter().enumerate() {
        let row = pivots.len() + i;
        out[(row, r)] = KRat::one();
        for (j, &p) in pivots.iter().enumerate() {
            out[(row, p)] = -mbar[i][j].clone();
        }
    }
    out
}

/// Rows below `m` of `M W` vanish through the full truncation (checked after clearing denominators).
fn verify_defining(dm: &DefiningMatrix, rows: &[SeriesVector], others: &[usize], point: &Nf, len: usize) -> Result<()> {
    let shift_poly = |p: &KPoly| p.taylor_shift(point).coeffs().to_vec();
    for (i, &r) in others.iter().enumerate() {
        let den = dm.mbar[i].iter().fold(KPoly::one(), |acc, e| {
            let g = KPoly::gcd(&acc, e.den());
            (acc.clone() * e.den().clone()).exact_div(&g)
        });
        for (col, entry) in rows[r].iter().enumerate() {
            let mut acc = series_mul(&shift_poly(&den), entry, len);
            for (j, &p) in dm.pivot_rows.iter().enumerate() {
                let c = (KRat::from_poly(den.clone()) * dm.mbar[i][j].clone()).num().clone();
                let s = series_mul(&shift_poly(&c), &rows[p][col], len);
                acc.iter_mut().zip(s).for_each(|(a, b)| *a = a.clone() - b);
            }
            if acc.iter().any(|c| !c.is_zero()) {
                return Err(DgalError::Verification(format!("defining matrix leaves row {} nonzero", r + 1)));
            }
        }
    }
    Ok(())
}

/// Column-stacked entries of a matrix series: the solution vector of the direct sum.
fn stacked_entries(gamma: &TruncSeries) -> Vec<Vec<Nf>> {
    let n = gamma.nrows();
    (0..n).flat_map(|j| (0..n).map(move |i| (i, j))).map(|(i, j)| gamma.entry(i, j)).collect()
}

/// All monomials of degree `<= d` in the column-stacked entries: a solution of the
/// `S^{<=d}` system of the direct sum.
pub fn sym_power_vector(gamma: &TruncSeries, d: u32) -> SeriesVector {
    let entries = stacked_entries(gamma);
    let len = gamma.coeffs.len();
    monomials_upto(entries.len(), d)
        .iter()
        .map(|m| {
            let mut acc = vec![Nf::zero(); len];
            acc[0] = Nf::one();
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    acc = series_mul(&acc, &entries[k], len);
                }
            }
            acc
        })
        .collect()
}

/// Constant points `h` of the stabilizer of `Z`, found by pinning free entries.
fn sample_points(h: &AlgebraicSubgroup, count: usize, cfg: &GbConfig) -> Result<Vec<CMatrix>> {
    let n = h.n;
    if h.ideal.is_unit() {
        return Ok(Vec::new());
    }
    if h.dimension() == 0 {
        let pts = group_points_finite(h, cfg)?;
        if pts.field == h.field {
            return Ok(pts.points.into_iter().take(count).collect());
        }
        return Ok(pts.points.into_iter().filter(|p| p.to_rows().iter().flatten().all(|c| pts.field.coords(c)[1..].iter().all(|x| x.is_zero()))).take(count).collect());
    }
    let ring = h.ring().clone();
    let lms = h.ideal.leading_monomials();
    let free: Vec<usize> = (0..n * n).filter(|&k| !lms.iter().any(|m| m[k] > 0)).collect();
    let mut out: Vec<CMatrix> = Vec::new();
    for seed in 0..(8 * count as i64 + 8) {
        if out.len() >= count {
            break;
        }
        let mut gens = h.generators().to_vec();
        for (r, &k) in free.iter().enumerate() {
            let v = (seed * 7 + r as i64 * 3) % 11 - 5;
            gens.push(MultiPoly::var_at(&ring, k) - MultiPoly::constant(&ring, Nf::from_i64(v)));
        }
        let sol = match solve_zero_dimensional(&h.field, &gens, cfg) {
            Ok(s) => s,
            Err(AlgebraError::PositiveDimensional { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        if sol.field != h.field {
            continue;
        }
        for p in sol.points {
            let m = CMatrix::from_fn(n, n, |i, j| p[i * n + j].clone());
            if !m.det().is_zero() && !out.contains(&m) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// `W_Z = span { S^{<=d}(F h) : h constant, F h in Z }`, with `Z` the zero set of
/// `rel` and `h` sampled from its stabilizer.
pub fn wz_span(rel: &RelationIdeal<KRat>, gamma: &TruncSeries, samples: usize, cfg: &GbConfig) -> Result<DefinableSubspace> {
    let h = stabilizer_group(rel, cfg)?;
    let points = sample_points(&h, samples, cfg)?;
    let len = gamma.coeffs.len();
    let mut echelon: Option<EchelonBasis<Nf>> = None;
    let mut basis = Vec::new();
    for g in points {
        let fh = gamma.mul_const(&g);
        if rel.basis.iter().any(|p| poly_series(p, &fh, len).iter().any(|c| !c.is_zero())) {
            continue;
        }
        let vector = sym_power_vector(&fh, rel.degree);
        let flat: Vec<Nf> = vector.iter().flatten().cloned().collect();
        let ech = echelon.get_or_insert_with(|| EchelonBasis::new(flat.len()));
        if ech.insert(flat) {
            basis.push(vector);
        }
    }
    if basis.is_empty() {
        return Err(DgalError::Unsupported("no constant points of Z found under the sampling budget".into()));
    }
    DefinableSubspace::new(&rel.field, &gamma.point, basis)
}

/// `ℓ = 2 ℓ'` from a degree bound `ℓ'` on the rational parts of hyperexponential solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientBound {
    pub ell: usize,
    pub hyperexp_bound: usize,
    pub source: String,
}

pub fn coefficient_degree_bound(hyperexp_bound: usize, source: &str) -> CoefficientBound {
    CoefficientBound { ell: 2 * hyperexp_bound, hyperexp_bound, source: source.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;

    fn nf(k: i64) -> Nf {
        Nf::from_i64(k)
    }

    fn poly_series_at(coeffs: &[i64], point: i64, len: usize) -> Vec<Nf> {
        let p = KPoly::new(coeffs.iter().map(|&c| nf(c)).collect());
        let mut s = p.taylor_shift(&nf(point)).coeffs().to_vec();
        s.resize(len, Nf::zero());
        s
    }

    #[test]
    fn line_through_t_and_t_squared() {
        let w = vec![poly_series_at(&[0, 1], 1, 12), poly_series_at(&[0, 0, 1], 1, 12)];
        let dm = defining_matrix(&[w], &nf(1), 2).unwrap();
        assert_eq!(dm.pivot_rows, vec![0]);
        assert_eq!(dm.mbar[0][0], KRat::t());
        assert_eq!(dm.render(2), vec!["w2 = (t)*w1"]);
    }

    #[test]
    fn exponential_is_not_definable() {
        let mut e = vec![Nf::one()];
        for k in 1..20 {
            let prev = e[k - 1].clone();
            e.push(prev * Nf::from_rational(&(int(1) / int(k as i64))));
        }
        let w = vec![poly_series_at(&[1], 0, 20), e];
        let err = defining_matrix(&[w], &nf(0), 3).unwrap_err();
        assert!(matches!(err, DgalError::Unsupported(_)), "{err}");
    }

    #[test]
    fn full_space_has_no_constraints() {
        let a = vec![poly_series_at(&[1], 0, 10), poly_series_at(&[0, 1], 0, 10)];
        let b = vec![poly_series_at(&[0, 1], 0, 10), poly_series_at(&[1], 0, 10)];
        let dm = defining_matrix(&[a, b], &nf(0), 1).unwrap();
        assert!(dm.mbar.is_empty());
        assert_eq!(dm.matrix, KMatrix::identity(2));
    }

    #[test]
    fn margin_error() {
        let w = vec![poly_series_at(&[1], 0, 5)];
        assert!(matches!(defining_matrix(&[w], &nf(0), 3), Err(DgalError::Margin { .. })));
    }

    #[test]
    fn coefficient_bound_doubles() {
        assert_eq!(coefficient_degree_bound(3, "input").ell, 6);
        assert_eq!(coefficient_degree_bound(0, "input").ell, 0);
    }

    #[test]
    fn wz_span_of_square_root() {
        use crate::ode::OdeSystem;
        use crate::relations::{relation_ideal, RelationConfig};
        let field = NumberField::rationals();
        let sys = OdeSystem::from_strings(&field, &[&["1/(2*t)"]]).unwrap();
        let rel = relation_ideal(&sys, &nf(1), &RelationConfig::new(2)).unwrap();
        let gamma = sys.fundamental_series(&nf(1), 30).unwrap();
        let mut w = wz_span(&rel, &gamma, 4, &GbConfig::default()).unwrap();
        assert_eq!((w.ambient, w.dim()), (3, 2));
        let dm = w.define(1).unwrap();
        assert_eq!(dm.render(3), vec!["w3 = (t)*w1"]);
    }
}
