//! Linear differential systems over `k = C(t)` and their power-series solutions.

use crate::algebra::factor::factor_over;
use crate::algebra::linalg::Matrix;
use crate::algebra::multipoly::monomials_upto;
use crate::algebra::numfield::Embedding;
use crate::algebra::parse::{parse_ratfunc, parse_rational_poly};
use crate::algebra::poly::Poly;
use crate::{CMatrix, DgalError, Field, KMatrix, KPoly, KRat, Nf, NumberField, Result};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// `Y' = A Y` with `A` an `n x n` matrix over `k`.
#[derive(Clone, Debug)]
pub struct OdeSystem {
    field: NumberField,
    a: KMatrix,
    /// Monic lcm of the entry denominators.
    q: KPoly,
}

/// Serialized form of an [`OdeSystem`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SystemDoc {
    pub n: usize,
    pub entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<String>,
}

impl OdeSystem {
    pub fn new(field: &NumberField, a: KMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() || a.nrows() == 0 {
            return Err(DgalError::Invalid(format!("system matrix must be square and nonempty, got {}x{}", a.nrows(), a.ncols())));
        }
        let mut q = KPoly::one();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                let d = a[(i, j)].den();
                q = q.clone() * d.exact_div(&Poly::gcd(&q, d));
            }
        }
        Ok(OdeSystem { field: field.clone(), a, q })
    }

    /// Parse entries given as strings in the polynomial grammar.
    pub fn from_strings(field: &NumberField, rows: &[&[&str]]) -> Result<Self> {
        let rows: Result<Vec<Vec<KRat>>> =
            rows.iter().map(|r| r.iter().map(|s| parse_ratfunc(s, field).map_err(DgalError::from)).collect()).collect();
        Self::new(field, Matrix::from_rows(rows?))
    }

    pub fn from_doc(doc: &SystemDoc) -> Result<Self> {
        let field = match &doc.minpoly {
            Some(m) => NumberField::from_minpoly(&parse_rational_poly(m)?)?,
            None => NumberField::rationals(),
        };
        if doc.entries.len() != doc.n || doc.entries.iter().any(|r| r.len() != doc.n) {
            return Err(DgalError::Invalid(format!("expected {0}x{0} entries", doc.n)));
        }
        let rows: Vec<Vec<&str>> = doc.entries.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
        let refs: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
        Self::from_strings(&field, &refs)
    }

    pub fn to_doc(&self) -> SystemDoc {
        let n = self.n();
        SystemDoc {
            n,
            entries: (0..n).map(|i| (0..n).map(|j| self.a[(i, j)].render()).collect()).collect(),
            minpoly: (!self.field.is_rationals()).then(|| self.field.minpoly().render("g")),
        }
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &KMatrix {
        &self.a
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn denominator(&self) -> &KPoly {
        &self.q
    }

    pub fn is_regular(&self, a: &Nf) -> bool {
        !self.q.eval(a).is_zero()
    }

    /// Error naming the irreducible factor of `q` that vanishes at `a`, if any.
    pub fn check_regular(&self, a: &Nf) -> Result<()> {
        if self.is_regular(a) {
            return Ok(());
        }
        let factor = factor_over(&self.field, &self.q)
            .into_iter()
            .map(|(f, _)| f)
            .find(|f| f.eval(a).is_zero())
            .unwrap_or_else(|| self.q.clone());
        Err(DgalError::Singular { point: a.to_string(), factor: factor.render("t") })
    }

    /// Move the system to a larger constant field.
    pub fn extend(&self, emb: &Embedding) -> OdeSystem {
        let a = self.a.map(|f| f.map(|c| emb.apply(c)));
        OdeSystem::new(&emb.target, a).expect("extension keeps the shape")
    }

    /// `A(t) = sum A_i (t-a)^i`, coefficients `A_0..=A_order`.
    pub fn expand_at(&self, a: &Nf, order: usize) -> Result<Vec<CMatrix>> {
        self.check_regular(a)?;
        let n = self.n();
        let entries: Vec<Vec<Vec<Nf>>> = (0..n)
            .map(|i| (0..n).map(|j| self.a[(i, j)].series_at(a, order).expect("regular point")).collect())
            .collect();
        Ok((0..=order).map(|k| Matrix::from_fn(n, n, |i, j| entries[i][j][k].clone())).collect())
    }

    /// Fundamental matrix `Γ_a` normalized by `Γ_a(a) = I`.
    pub fn fundamental_series(&self, a: &Nf, order: usize) -> Result<TruncSeries> {
        self.solution_series(a, order, Matrix::identity(self.n()))
    }

    /// Series solution with prescribed value `init` at `a` (any number of columns).
    pub fn solution_series(&self, a: &Nf, order: usize, init: CMatrix) -> Result<TruncSeries> {
        let ak = self.expand_at(a, order)?;
        let mut d: Vec<CMatrix> = vec![init];
        for m in 0..order {
            let mut acc = CMatrix::zeros(self.n(), d[0].ncols());
            for j in 0..=m {
                if !ak[j].is_zero() && !d[m - j].is_zero() {
                    acc = &acc + &(&ak[j] * &d[m - j]);
                }
            }
            d.push(acc.scale(&Nf::from_i64(m as i64 + 1).inv()));
        }
        Ok(TruncSeries { point: a.clone(), coeffs: d })
    }

    /// `diag(A, ..., A)` with `n` blocks; its solution is `F` stacked column by column.
    pub fn direct_sum(&self) -> OdeSystem {
        let n = self.n();
        let a = Matrix::from_fn(n * n, n * n, |r, c| {
            if r / n == c / n {
                self.a[(r % n, c % n)].clone()
            } else {
                KRat::zero()
            }
        });
        OdeSystem::new(&self.field, a).expect("square")
    }

    /// System satisfied by all monomials of degree `<= d` in the `n^2` entries of
    /// a solution of the direct sum. Monomials follow [`monomials_upto`].
    pub fn sym_power(&self, d: u32) -> OdeSystem {
        sym_power_of(&self.direct_sum(), d)
    }

    /// `∧^m A` on the basis of increasing `m`-subsets in lexicographic order.
    pub fn exterior_power(&self, m: usize) -> Result<OdeSystem> {
        let n = self.n();
        if m == 0 || m > n {
            return Err(DgalError::Invalid(format!("exterior power {m} out of range 1..={n}")));
        }
        let subsets = subsets(n, m);
        let index = |s: &[usize]| subsets.iter().position(|t| t.as_slice() == s).expect("subset");
        let mut out = KMatrix::zeros(subsets.len(), subsets.len());
        for (ri, set) in subsets.iter().enumerate() {
            for (pos, &r) in set.iter().enumerate() {
                for l in 0..n {
                    let a = &self.a[(r, l)];
                    if a.is_zero() || (l != r && set.contains(&l)) {
                        continue;
                    }
                    let mut t = set.clone();
                    t[pos] = l;
                    let between = set.iter().filter(|&&s| s > r.min(l) && s < r.max(l)).count();
                    t.sort_unstable();
                    let sign = if between % 2 == 0 { KRat::one() } else { -KRat::one() };
                    let ci = index(&t);
                    out[(ri, ci)] = out[(ri, ci)].clone() + sign * a.clone();
                }
            }
        }
        OdeSystem::new(&self.field, out)
    }

    /// Block diagonal sum of two systems.
    pub fn block_sum(&self, other: &OdeSystem) -> OdeSystem {
        let (n, m) = (self.n(), other.n());
        let a = Matrix::from_fn(n + m, n + m, |r, c| match (r < n, c < n) {
            (true, true) => self.a[(r, c)].clone(),
            (false, false) => other.a[(r - n, c - n)].clone(),
            _ => KRat::zero(),
        });
        OdeSystem::new(&self.field, a).expect("square")
    }
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// Symmetric power system of an arbitrary system acting on `v`.
pub fn sym_power_of(sys: &OdeSystem, d: u32) -> OdeSystem {
    let m = sys.n();
    let monos = monomials_upto(m, d);
    let index: std::collections::HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut out = KMatrix::zeros(monos.len(), monos.len());
    for (ri, e) in monos.iter().enumerate() {
        for k in 0..m {
            if e[k] == 0 {
                continue;
            }
            for l in 0..m {
                let a = &sys.a[(k, l)];
                if a.is_zero() {
                    continue;
                }
                let mut f = e.clone();
                f[k] -= 1;
                f[l] += 1;
                let ci = index[&f];
                out[(ri, ci)] = out[(ri, ci)].clone() + KRat::from_i64(e[k] as i64) * a.clone();
            }
        }
    }
    OdeSystem::new(&sys.field, out).expect("square")
}

/// Companion system of an algebraic function: for `Q(γ) = 0` the vector
/// `(1, γ, ..., γ^{l-1})` solves the returned system.
pub fn companion_of_minpoly(field: &NumberField, q: &Poly<KRat>) -> Result<OdeSystem> {
    let l = q.degree().ok_or_else(|| DgalError::Invalid("zero minimal polynomial".into()))?;
    if !q.lc().is_one() {
        return Err(DgalError::Invalid(format!("minimal polynomial {} is not monic", q.render("x"))));
    }
    if l == 0 {
        return Err(DgalError::Invalid("constant minimal polynomial".into()));
    }
    let qx = q.derivative();
    let qt = q.map(|c| c.derivative());
    let (g, s, _) = Poly::ext_gcd(&qx, q);
    if g.degree() != Some(0) {
        return Err(DgalError::Invalid(format!("minimal polynomial {} is not squarefree", q.render("x"))));
    }
    // γ' = -Q_t(γ) / Q_x(γ) mod Q
    let inv_qx = s.scale(&g.lc().inv());
    let gprime = (-(qt * inv_qx)).rem(q);
    let mut b = KMatrix::zeros(l, l);
    let mut pow_prev = Poly::<KRat>::one(); // γ^{i-1}
    for i in 1..l {
        let row = (pow_prev.clone() * gprime.clone()).scale(&KRat::from_i64(i as i64)).rem(q);
        for j in 0..l {
            b[(i, j)] = row.coeff(j);
        }
        pow_prev = (pow_prev * Poly::x()).rem(q);
    }
    OdeSystem::new(field, b)
}

/// Truncated matrix power series `sum D_i (t-a)^i`, `i = 0..=order`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries {
    pub point: Nf,
    pub coeffs: Vec<CMatrix>,
}

impl TruncSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn nrows(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn ncols(&self) -> usize {
        self.coeffs[0].ncols()
    }

    /// Scalar series of entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Vec<Nf> {
        self.coeffs.iter().map(|d| d[(i, j)].clone()).collect()
    }

    pub fn truncate(&self, order: usize) -> TruncSeries {
        TruncSeries { point: self.point.clone(), coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    /// Term-wise derivative; the order drops by one.
    pub fn derivative(&self) -> TruncSeries {
        let coeffs =
            (1..self.coeffs.len()).map(|k| self.coeffs[k].scale(&Nf::from_i64(k as i64))).collect::<Vec<_>>();
        let coeffs = if coeffs.is_empty() { vec![CMatrix::zeros(self.nrows(), self.ncols())] } else { coeffs };
        TruncSeries { point: self.point.clone(), coeffs }
    }

    /// Truncated product with another matrix series (or with expanded coefficients of `A`).
    pub fn mul_coeffs(left: &[CMatrix], right: &[CMatrix], len: usize) -> Vec<CMatrix> {
        (0..len)
            .map(|k| {
                let mut acc = CMatrix::zeros(left[0].nrows(), right[0].ncols());
                for j in 0..=k {
                    if j < left.len() && k - j < right.len() && !left[j].is_zero() && !right[k - j].is_zero() {
                        acc = &acc + &(&left[j] * &right[k - j]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Multiply by a constant matrix on the right.
    pub fn mul_const(&self, h: &CMatrix) -> TruncSeries {
        TruncSeries { point: self.point.clone(), coeffs: self.coeffs.iter().map(|d| d * h).collect() }
    }

    /// Series of the determinant (square series only).
    pub fn det(&self) -> Vec<Nf> {
        let n = self.nrows();
        let len = self.coeffs.len();
        let entries: Vec<Vec<Vec<Nf>>> = (0..n).map(|i| (0..n).map(|j| self.entry(i, j)).collect()).collect();
        det_series(&entries, len)
    }

    pub fn map_field(&self, emb: &Embedding) -> TruncSeries {
        TruncSeries { point: emb.apply(&self.point), coeffs: self.coeffs.iter().map(|d| d.map(|c| emb.apply(c))).collect() }
    }
}

/// Truncated product of scalar series.
pub fn series_mul(a: &[Nf], b: &[Nf], len: usize) -> Vec<Nf> {
    let mut out = vec![Nf::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
    }
    out
}

/// Determinant of a matrix of series by cofactor expansion (small `n`).
pub fn det_series(m: &[Vec<Vec<Nf>>], len: usize) -> Vec<Nf> {
    let n = m.len();
    if n == 1 {
        return m[0][0][..len.min(m[0][0].len())].to_vec();
    }
    let mut acc = vec![Nf::zero(); len];
    for j in 0..n {
        let minor: Vec<Vec<Vec<Nf>>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, s)| s.clone()).collect()).collect();
        let term = series_mul(&m[0][j], &det_series(&minor, len), len);
        for (k, t) in term.into_iter().enumerate() {
            acc[k] = if j % 2 == 0 { acc[k].clone() + t } else { acc[k].clone() - t };
        }
    }
    acc
}
