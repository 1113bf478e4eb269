//! Integer lattices: Hermite and Smith normal forms, kernels, saturation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntVec = Vec<BigInt>;

pub fn ivec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn row_combine(a: &IntVec, b: &IntVec, ca: &BigInt, cb: &BigInt) -> IntVec {
    a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect()
}

/// Row-style Hermite normal form with the unimodular transform: `u * rows = h`.
/// Pivots are positive and entries above a pivot are reduced into `[0, pivot)`.
/// Zero rows of `h` are kept at the bottom so `u` stays square.
pub fn hnf_with_transform(rows: &[IntVec], ncols: usize) -> (Vec<IntVec>, Vec<IntVec>) {
    let m = rows.len();
    let mut h: Vec<IntVec> = rows.to_vec();
    let mut u: Vec<IntVec> = (0..m).map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        // gcd-combine all rows below r into row r on column c
        for i in r + 1..m {
            if h[i][c].is_zero() {
                continue;
            }
            if h[r][c].is_zero() {
                h.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let (a, b) = (h[r][c].clone(), h[i][c].clone());
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (p, q) = (&a / &g, &b / &g);
            let nr = row_combine(&h[r], &h[i], &x, &y);
            let ni = row_combine(&h[r], &h[i], &-&q, &p);
            h[r] = nr;
            h[i] = ni;
            let ur = row_combine(&u[r], &u[i], &x, &y);
            let ui = row_combine(&u[r], &u[i], &-&q, &p);
            u[r] = ur;
            u[i] = ui;
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            h[r] = h[r].iter().map(|x| -x).collect();
            u[r] = u[r].iter().map(|x| -x).collect();
        }
        let piv = h[r][c].clone();
        for i in 0..r {
            let q = h[i][c].div_floor(&piv);
            if !q.is_zero() {
                h[i] = row_combine(&h[i], &h[r], &BigInt::one(), &-&q);
                u[i] = row_combine(&u[i], &u[r], &BigInt::one(), &-&q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row lattice.
pub fn hnf(rows: &[IntVec], ncols: usize) -> Vec<IntVec> {
    hnf_with_transform(rows, ncols).0.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Basis (in Hermite form) of `{v in Z^ncols : m v = 0}`.
pub fn integer_kernel(m: &[IntVec], ncols: usize) -> Vec<IntVec> {
    let mt: Vec<IntVec> = (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect();
    let (h, u) = hnf_with_transform(&mt, m.len());
    let ker: Vec<IntVec> = h.iter().zip(u).filter(|(hr, _)| hr.iter().all(|x| x.is_zero())).map(|(_, ur)| ur).collect();
    hnf(&ker, ncols)
}

/// `(L tensor Q) intersect Z^n`.
pub fn saturate(basis: &[IntVec], n: usize) -> Vec<IntVec> {
    if basis.is_empty() {
        return Vec::new();
    }
    let perp = integer_kernel(basis, n);
    if perp.is_empty() {
        return (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    }
    integer_kernel(&perp, n)
}

pub fn rank(basis: &[IntVec], n: usize) -> usize {
    hnf(basis, n).len()
}

/// Is `v` in the row lattice spanned by `basis`?
pub fn contains(basis: &[IntVec], v: &IntVec) -> bool {
    let n = v.len();
    let h = hnf(basis, n);
    let mut w = v.clone();
    for row in &h {
        let c = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
        if w[c].is_zero() {
            continue;
        }
        let (q, r) = w[c].div_rem(&row[c]);
        if !r.is_zero() {
            return false;
        }
        w = row_combine(&w, row, &BigInt::one(), &-q);
    }
    w.iter().all(|x| x.is_zero())
}

/// Invariant factors `d_1 | d_2 | ...` (nonzero only) of the Smith normal form.
pub fn smith_invariants(rows: &[IntVec], ncols: usize) -> Vec<BigInt> {
    let mut a: Vec<IntVec> = rows.to_vec();
    let m = a.len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < m.min(ncols) {
        // find a nonzero entry of minimal absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..ncols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        let p = a[t][t].clone();
        for i in t + 1..m {
            let q = a[i][t].div_floor(&p);
            if !q.is_zero() {
                a[i] = row_combine(&a[i], &a[t], &BigInt::one(), &-&q);
            }
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..ncols {
            let q = a[t][j].div_floor(&p);
            if !q.is_zero() {
                for row in a.iter_mut() {
                    let v = &row[j] - &q * &row[t];
                    row[j] = v;
                }
            }
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility condition: push a non-multiple into the pivot row
        if let Some(i) = (t + 1..m).find(|&i| (t + 1..ncols).any(|j| !(&a[i][j] % &p).is_zero())) {
            let ri = a[i].clone();
            a[t] = row_combine(&a[t], &ri, &BigInt::one(), &BigInt::one());
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// `[saturate(L) : L]`, for a lattice given by any spanning set.
pub fn saturation_index(basis: &[IntVec], n: usize) -> BigInt {
    smith_invariants(&hnf(basis, n), n).iter().fold(BigInt::one(), |a, b| a * b)
}
