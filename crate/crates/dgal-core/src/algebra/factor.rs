//! Univariate factorization over the rationals (Berlekamp, Hensel lifting,
//! subset recombination) and over number fields (Trager's norm method).

use super::field::{Field, Rational};
use super::numfield::{NumberField, Nf};
use super::poly::Poly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

// ---------- arithmetic in F_p[x] with small p ----------

type Fp = Vec<u64>;

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_inv(a: u64, p: u64) -> u64 {
    fp_powmod(a, p - 2, p)
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    fp_trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    fp_trim(c)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = fp_inv(*b.last().unwrap(), p);
    let db = b.len() - 1;
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] * inv % p;
        q[i] = c;
        if c == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - c * y % p) % p;
        }
    }
    r.truncate(db);
    (fp_trim(q), fp_trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|x| x * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

/// `(s, t)` with `s a + t b = 1` for coprime `a`, `b`.
fn fp_bezout(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = fp_inv(r0[0], p);
    (s0.iter().map(|x| x * inv % p).collect(), t0.iter().map(|x| x * inv % p).collect())
}

fn fp_deriv(a: &Fp, p: u64) -> Fp {
    fp_trim(a.iter().enumerate().skip(1).map(|(i, x)| (i as u64 % p) * x % p).collect())
}

/// Left kernel of a square matrix over F_p.
fn fp_left_kernel(m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    // transpose, then right kernel
    let mut a: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..n).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = fp_inv(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                let pivot = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[i][f]) % p;
            }
            v
        })
        .collect()
}

/// Berlekamp factorization of a monic squarefree polynomial over F_p.
fn fp_berlekamp(f: &Fp, p: u64) -> Vec<Fp> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let xp = {
        // x^p mod f by repeated squaring
        let mut acc: Fp = vec![1];
        let mut base: Fp = vec![0, 1];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_divrem(&fp_mul(&acc, &base, p), f, p).1;
            }
            base = fp_divrem(&fp_mul(&base, &base, p), f, p).1;
            e >>= 1;
        }
        acc
    };
    let mut rows = Vec::with_capacity(n);
    let mut cur: Fp = vec![1];
    for i in 0..n {
        let mut row: Vec<u64> = (0..n).map(|j| cur.get(j).copied().unwrap_or(0)).collect();
        row[i] = (row[i] + p - 1) % p;
        rows.push(row);
        cur = fp_divrem(&fp_mul(&cur, &xp, p), f, p).1;
    }
    let kernel = fp_left_kernel(rows, p);
    let r = kernel.len();
    let mut factors = vec![f.clone()];
    for v in kernel.iter() {
        if factors.len() == r {
            break;
        }
        let v = fp_trim(v.clone());
        if v.len() <= 1 {
            continue;
        }
        let mut next = Vec::new();
        for u in factors {
            if u.len() <= 2 {
                next.push(u);
                continue;
            }
            let mut rest = u;
            for s in 0..p {
                if rest.len() <= 2 {
                    break;
                }
                let vs = fp_sub(&v, &vec![s], p);
                let g = fp_gcd(&rest, &vs, p);
                if g.len() > 1 && g.len() < rest.len() {
                    rest = fp_divrem(&rest, &g, p).0;
                    next.push(g);
                }
            }
            next.push(fp_monic(&rest, p));
        }
        factors = next;
    }
    factors
}

// ---------- integer polynomials ----------

type Zp = Vec<BigInt>;

fn z_trim(mut a: Zp) -> Zp {
    while a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
    a
}

fn z_mod(a: &Zp, m: &BigInt) -> Zp {
    z_trim(a.iter().map(|x| x.mod_floor(m)).collect())
}

fn z_mul_mod(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    z_mod(&c, m)
}

fn z_sub(a: &Zp, b: &Zp) -> Zp {
    let n = a.len().max(b.len());
    z_trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

fn z_add(a: &Zp, b: &Zp) -> Zp {
    let n = a.len().max(b.len());
    z_trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
            .collect(),
    )
}

fn to_fp(a: &Zp, p: u64) -> Fp {
    let pb = BigInt::from(p);
    fp_trim(a.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn from_fp(a: &Fp) -> Zp {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

/// Remainder of `a` by monic `b` over Z/m.
fn z_rem_monic(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    let mut r = z_mod(a, m);
    let db = b.len() - 1;
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap().clone();
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        r = z_mod(&r, m);
    }
    r
}

/// Lift `f ≡ g h (mod p)` to `mod p^k`, with `f`, `g`, `h` monic mod `p^k`.
fn hensel_pair(f: &Zp, g: &Fp, h: &Fp, p: u64, k: u32) -> (Zp, Zp) {
    let (s, t) = fp_bezout(g, h, p);
    let (s, t) = (from_fp(&s), from_fp(&t));
    let pb = BigInt::from(p);
    let mut g = from_fp(g);
    let mut h = from_fp(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let diff = z_sub(&z_mod(f, &next), &z_mul_mod(&g, &h, &next));
        let e: Zp = z_mod(&diff.iter().map(|x| x / &pj).collect(), &pb);
        let dg = z_rem_monic(&z_mul_mod(&t, &e, &pb), &g, &pb);
        let dh = z_rem_monic(&z_mul_mod(&s, &e, &pb), &h, &pb);
        g = z_mod(&z_add(&g, &dg.iter().map(|x| x * &pj).collect()), &next);
        h = z_mod(&z_add(&h, &dh.iter().map(|x| x * &pj).collect()), &next);
        pj = next;
    }
    (g, h)
}

fn hensel_multi(f: &Zp, factors: &[Fp], p: u64, k: u32) -> Vec<Zp> {
    if factors.len() == 1 {
        return vec![z_mod(f, &BigInt::from(p).pow(k))];
    }
    let mid = factors.len() / 2;
    let g = factors[..mid].iter().fold(vec![1u64], |acc, x| fp_mul(&acc, x, p));
    let h = factors[mid..].iter().fold(vec![1u64], |acc, x| fp_mul(&acc, x, p));
    let (gl, hl) = hensel_pair(f, &g, &h, p, k);
    let mut out = hensel_multi(&gl, &factors[..mid], p, k);
    out.extend(hensel_multi(&hl, &factors[mid..], p, k));
    out
}

fn symmetric(a: &Zp, m: &BigInt) -> Zp {
    let half: BigInt = m / 2;
    z_trim(
        a.iter()
            .map(|x| {
                let r = x.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn content(a: &Zp) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn primitive(a: &Zp) -> Zp {
    let c = content(a);
    let mut v: Zp = a.iter().map(|x| x / &c).collect();
    if v.last().is_some_and(|x| x.is_negative()) {
        v = v.into_iter().map(|x| -x).collect();
    }
    v
}

fn z_to_q(a: &Zp) -> Poly<Rational> {
    Poly::new(a.iter().map(|x| Rational::from_integer(x.clone())).collect())
}

/// Primitive integer polynomial with the same roots.
fn q_to_z(f: &Poly<Rational>) -> Zp {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let v: Zp = f.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    primitive(&v)
}

const PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if rec(i + 1, n, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// Irreducible factors of a squarefree primitive integer polynomial.
fn zassenhaus(f: &Zp) -> Vec<Zp> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f.last().unwrap().clone();
    let p = PRIMES
        .iter()
        .copied()
        .find(|&p| {
            let fp = to_fp(f, p);
            fp.len() == f.len() && fp_gcd(&fp, &fp_deriv(&fp, p), p).len() == 1
        })
        .expect("no suitable prime for factorization");
    let fp = fp_monic(&to_fp(f, p), p);
    let mod_factors = fp_berlekamp(&fp, p);
    if mod_factors.len() == 1 {
        return vec![f.clone()];
    }
    // Mignotte-style bound on coefficients of lc * (any factor)
    let maxc = f.iter().map(|x| x.abs()).max().unwrap();
    let bound = (BigInt::one() << n) * BigInt::from(n + 1) * maxc * lc.abs() * 2;
    let mut k = 1u32;
    let pb = BigInt::from(p);
    while pb.pow(k) <= bound {
        k += 1;
    }
    let m = pb.pow(k);
    let lc_inv = lc.modinv(&m).expect("lc invertible mod p^k");
    let f_monic = z_mod(&f.iter().map(|x| x * &lc_inv).collect(), &m);
    let mut lifted = hensel_multi(&f_monic, &mod_factors, p, k);
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found: Option<(Vec<usize>, Zp)> = None;
        let cur_lc = rest.last().unwrap().clone();
        for_each_subset(lifted.len(), s, &mut |idx| {
            let prod = idx.iter().fold(vec![cur_lc.clone()], |acc, &i| z_mul_mod(&acc, &lifted[i], &m));
            let cand = primitive(&symmetric(&prod, &m));
            let (q, r) = z_to_q(&rest).divrem(&z_to_q(&cand));
            if r.is_zero() && q.coeffs().iter().all(|c| c.is_integer()) {
                found = Some((idx.to_vec(), cand));
                return true;
            }
            false
        });
        match found {
            Some((idx, cand)) => {
                let q = z_to_q(&rest).exact_div(&z_to_q(&cand));
                rest = q.coeffs().iter().map(|c| c.to_integer()).collect();
                for &i in idx.iter().rev() {
                    lifted.remove(i);
                }
                out.push(cand);
            }
            None => s += 1,
        }
    }
    if rest.len() > 1 {
        out.push(primitive(&rest));
    }
    out
}

/// Monic irreducible factors over Q with multiplicities.
pub fn factor_rational(f: &Poly<Rational>) -> Vec<(Poly<Rational>, u32)> {
    let mut out = Vec::new();
    for (g, e) in f.squarefree_decomposition() {
        for h in zassenhaus(&q_to_z(&g)) {
            out.push((z_to_q(&h).monic(), e));
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| format!("{:?}", a.0).cmp(&format!("{:?}", b.0))));
    out
}

pub fn is_irreducible_rational(f: &Poly<Rational>) -> bool {
    let fs = factor_rational(f);
    fs.len() == 1 && fs[0].1 == 1
}

/// Norm over Q of a polynomial over the number field: characteristic polynomial
/// of multiplication by `x` on `K[x]/(g)` viewed as a Q-vector space.
pub fn norm_poly(field: &NumberField, g: &Poly<Nf>) -> Poly<Rational> {
    let dk = field.degree();
    let m = g.degree().expect("norm of zero polynomial");
    let g = g.monic();
    let dim = dk * m;
    let mut mat = super::linalg::Matrix::<Rational>::zeros(dim, dim);
    // basis index: b * dk + a  <->  theta^a x^b
    for b in 0..m {
        for a in 0..dk {
            let col = b * dk + a;
            let th = field.gen_power(a);
            if b + 1 < m {
                mat[((b + 1) * dk + a, col)] = Rational::one();
            } else {
                for j in 0..m {
                    let c = -(g.coeff(j) * th.clone());
                    for (ai, q) in field.coords(&c).into_iter().enumerate() {
                        mat[(j * dk + ai, col)] = q;
                    }
                }
            }
        }
    }
    mat.charpoly()
}

/// Monic irreducible factors over a number field with multiplicities.
pub fn factor_over(field: &NumberField, f: &Poly<Nf>) -> Vec<(Poly<Nf>, u32)> {
    if field.degree() == 1 {
        let fq = f.map(|c| c.as_rational().expect("rational coefficient"));
        return factor_rational(&fq).into_iter().map(|(g, e)| (g.map(Nf::from_rational), e)).collect();
    }
    let theta = field.generator();
    let mut out = Vec::new();
    for (g, e) in f.squarefree_decomposition() {
        if g.degree() == Some(1) {
            out.push((g, e));
            continue;
        }
        for s in shifts() {
            let sh = Nf::from_i64(s) * theta.clone();
            let gs = g.compose(&Poly::new(vec![-sh.clone(), Nf::one()]));
            let nrm = norm_poly(field, &gs);
            if !nrm.is_squarefree() {
                continue;
            }
            for (ni, _) in factor_rational(&nrm) {
                let ni_k = ni.map(Nf::from_rational);
                let h = Poly::gcd(&gs, &ni_k);
                if h.degree().unwrap_or(0) > 0 {
                    out.push((h.compose(&Poly::new(vec![sh.clone(), Nf::one()])).monic(), e));
                }
            }
            break;
        }
    }
    out
}

pub(crate) fn shifts() -> impl Iterator<Item = i64> {
    (0..).flat_map(|k: i64| if k == 0 { vec![0] } else { vec![k, -k] })
}

/// Roots in the field itself.
pub fn roots_in(field: &NumberField, f: &Poly<Nf>) -> Vec<Nf> {
    factor_over(field, f)
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| -g.coeff(0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn factors_cyclotomic_product() {
        // x^4 - 1 = (x-1)(x+1)(x^2+1)
        let fs = factor_rational(&p(&[-1, 0, 0, 0, 1]));
        assert_eq!(fs.len(), 3);
        let prod = fs.iter().fold(Poly::one(), |acc, (g, e)| acc * g.pow(*e));
        assert_eq!(prod, p(&[-1, 0, 0, 0, 1]));
    }

    #[test]
    fn quartic_without_rational_roots() {
        // (x^2+1)(x^2-2), and x^4+1 irreducible
        let fs = factor_rational(&(p(&[1, 0, 1]) * p(&[-2, 0, 1])));
        assert_eq!(fs.len(), 2);
        assert!(is_irreducible_rational(&p(&[1, 0, 0, 0, 1])));
    }

    #[test]
    fn swinnerton_dyer_like() {
        // minimal polynomial of sqrt2 + sqrt3 is irreducible: x^4 - 10x^2 + 1
        assert!(is_irreducible_rational(&p(&[1, 0, -10, 0, 1])));
        // nonmonic with content
        let f = p(&[6, 5, 1]).scale(&int(3)) * p(&[1, 0, 2]);
        let fs = factor_rational(&f);
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn repeated_factors() {
        let f = p(&[-1, 1]).pow(3) * p(&[1, 1, 1]);
        let fs = factor_rational(&f);
        assert_eq!(fs, vec![(p(&[-1, 1]), 3), (p(&[1, 1, 1]), 1)]);
    }
}
