//! Reference computations in plain `BigRational` arithmetic, written
//! independently of the library's series, relation and lattice code.
#![allow(dead_code)]

use dgal_core::algebra::multipoly::Var;
use dgal_core::{CMatrix, Field, KMultiPoly, Nf};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Dense univariate polynomial, constant term first.
pub type Upoly = Vec<Q>;

pub fn trim(mut p: Upoly) -> Upoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn add(a: &[Q], b: &[Q]) -> Upoly {
    let mut out = vec![Q::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

pub fn mul(a: &[Q], b: &[Q]) -> Upoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn scale(a: &[Q], c: &Q) -> Upoly {
    trim(a.iter().map(|x| x * c).collect())
}

pub fn eval(p: &[Q], a: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * a + c)
}

/// Coefficients of `p(a + u)` in `u`.
pub fn shift(p: &[Q], a: &Q) -> Upoly {
    let lin = vec![a.clone(), Q::one()];
    p.iter().rev().fold(Vec::new(), |acc, c| add(&mul(&acc, &lin), std::slice::from_ref(c)))
}

/// `num / den` as a power series, `den[0] != 0`.
pub fn series_div(num: &[Q], den: &[Q], len: usize) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = num.get(k).cloned().unwrap_or_else(Q::zero);
        for i in 1..=k.min(den.len().saturating_sub(1)) {
            acc -= &den[i] * &out[k - i];
        }
        out.push(acc / &den[0]);
    }
    out
}

pub fn series_mul(a: &[Q], b: &[Q], len: usize) -> Vec<Q> {
    (0..len)
        .map(|k| (0..=k).filter(|&i| i < a.len() && k - i < b.len()).fold(Q::zero(), |acc, i| acc + &a[i] * &b[k - i]))
        .collect()
}

fn render_q(c: &Q) -> String {
    if c.is_integer() {
        format!("({})", c.numer())
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

/// Text form in `t` accepted by the library's parser.
pub fn render(p: &[Q]) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match k {
            0 => render_q(c),
            1 => format!("{}*t", render_q(c)),
            _ => format!("{}*t^{k}", render_q(c)),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// `A = num / den`, one scalar denominator for every entry.
#[derive(Clone, Debug)]
pub struct RatSystem {
    pub n: usize,
    /// Row-major numerators.
    pub num: Vec<Upoly>,
    pub den: Upoly,
}

/// Flattened `n x n` matrix coefficients of a series, constant term first.
pub type MatSeries = Vec<Vec<Q>>;

impl RatSystem {
    pub fn rows(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| format!("({})/({})", render(&self.num[i * self.n + j]), render(&self.den))).collect())
            .collect()
    }

    pub fn regular_at(&self, a: &Q) -> bool {
        !eval(&self.den, a).is_zero()
    }

    /// `Γ` with `Γ(a) = I`, coefficients `0..=order`.
    pub fn fundamental(&self, a: &Q, order: usize) -> MatSeries {
        let n = self.n;
        let den = shift(&self.den, a);
        let acoef: Vec<Vec<Q>> = self.num.iter().map(|p| series_div(&shift(p, a), &den, order + 1)).collect();
        let mut g: MatSeries = vec![(0..n * n).map(|k| if k / n == k % n { Q::one() } else { Q::zero() }).collect()];
        for k in 0..order {
            let mut next = vec![Q::zero(); n * n];
            for i in 0..=k {
                for r in 0..n {
                    for c in 0..n {
                        for l in 0..n {
                            next[r * n + c] += &acoef[r * n + l][i] * &g[k - i][l * n + c];
                        }
                    }
                }
            }
            let kk = q(k as i64 + 1);
            g.push(next.into_iter().map(|x| x / &kk).collect());
        }
        g
    }

    /// `den Γ' = num Γ` coefficient-wise, as far as the truncation reaches.
    pub fn residual_vanishes(&self, a: &Q, gamma: &MatSeries) -> bool {
        let n = self.n;
        let len = gamma.len() - 1;
        let den = shift(&self.den, a);
        let nums: Vec<Upoly> = self.num.iter().map(|p| shift(p, a)).collect();
        let deriv: MatSeries = (0..len).map(|k| gamma[k + 1].iter().map(|x| x * q(k as i64 + 1)).collect()).collect();
        (0..len).all(|k| {
            (0..n * n).all(|rc| {
                let (r, c) = (rc / n, rc % n);
                let lhs = (0..=k).filter(|&i| i < den.len()).fold(Q::zero(), |acc, i| acc + &den[i] * &deriv[k - i][rc]);
                let rhs = (0..=k).fold(Q::zero(), |acc, i| {
                    (0..n).fold(acc, |acc, l| {
                        let p = &nums[r * n + l];
                        if i < p.len() {
                            acc + &p[i] * &gamma[k - i][l * n + c]
                        } else {
                            acc
                        }
                    })
                });
                lhs == rhs
            })
        })
    }

    /// `den (det Γ)' = tr(num) det Γ` through the truncation.
    pub fn det_identity(&self, a: &Q, gamma: &MatSeries) -> bool {
        let n = self.n;
        let len = gamma.len();
        let entry = |r: usize, c: usize| -> Vec<Q> { gamma.iter().map(|m| m[r * n + c].clone()).collect() };
        let det = det_series(n, &entry, len);
        let dd: Vec<Q> = (0..len - 1).map(|k| &det[k + 1] * q(k as i64 + 1)).collect();
        let den = shift(&self.den, a);
        let tr = (0..n).fold(Vec::new(), |acc, i| add(&acc, &shift(&self.num[i * n + i], a)));
        let lhs = series_mul(&den, &dd, len - 1);
        let rhs = series_mul(&tr, &det, len - 1);
        lhs == rhs
    }

    pub fn trace_is_zero(&self) -> bool {
        (0..self.n).fold(Vec::new(), |acc, i| add(&acc, &self.num[i * self.n + i])).is_empty()
    }
}

/// Leibniz expansion over all permutations; fine for `n <= 3`.
pub fn det_series(n: usize, entry: &dyn Fn(usize, usize) -> Vec<Q>, len: usize) -> Vec<Q> {
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| (0..n).filter(|x| !p.contains(x)).map(|x| [p.clone(), vec![x]].concat()).collect::<Vec<_>>())
            .collect();
    }
    let mut out = vec![Q::zero(); len];
    for p in perms {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let mut term = vec![Q::one()];
        for (r, &c) in p.iter().enumerate() {
            term = series_mul(&term, &entry(r, c), len);
        }
        for (o, t) in out.iter_mut().zip(term) {
            if inversions % 2 == 0 {
                *o += t;
            } else {
                *o -= t;
            }
        }
    }
    out
}

fn random_poly(rng: &mut impl Rng, max_deg: usize) -> Upoly {
    let d = rng.gen_range(0..=max_deg);
    trim((0..=d).map(|_| q(rng.gen_range(-3..=3))).collect())
}

/// Random `A` with entry numerators of degree `<= max_deg` over a common denominator.
pub fn random_system(rng: &mut impl Rng, n: usize, max_deg: usize) -> RatSystem {
    let num = (0..n * n).map(|_| random_poly(rng, max_deg)).collect();
    let den = loop {
        let d = random_poly(rng, 2);
        if !d.is_empty() {
            break d;
        }
    };
    RatSystem { n, num, den }
}

/// A random integer point where the system is regular.
pub fn random_regular_point(rng: &mut impl Rng, sys: &RatSystem) -> Q {
    loop {
        let a = qf(rng.gen_range(-9..=9), rng.gen_range(1..=3));
        if sys.regular_at(&a) {
            return a;
        }
    }
}

/// `P diag(r_i / (t - c_i)) P^{-1}` for `2 x 2` integer `P` of determinant one.
/// The solutions are products of powers `(t - c_i)^{r_i}`, so relations exist.
pub fn kummer_system(rs: [Q; 2], cs: [Q; 2], p: [[i64; 2]; 2]) -> RatSystem {
    assert_eq!(p[0][0] * p[1][1] - p[0][1] * p[1][0], 1);
    let pinv = [[p[1][1], -p[0][1]], [-p[1][0], p[0][0]]];
    let lin = |c: &Q| vec![-c.clone(), Q::one()];
    let den = mul(&lin(&cs[0]), &lin(&cs[1]));
    // r_l / (t - c_l) = r_l (t - c_other) / den
    let parts = [scale(&lin(&cs[1]), &rs[0]), scale(&lin(&cs[0]), &rs[1])];
    let num = (0..4)
        .map(|k| {
            let (i, j) = (k / 2, k % 2);
            (0..2).fold(Vec::new(), |acc, l| add(&acc, &scale(&parts[l], &q(p[i][l] * pinv[l][j]))))
        })
        .collect();
    RatSystem { n: 2, num, den }
}

/// `Γ_a(b)` for `kummer_system(rs, [c, c], p)` when `(b - c) / (a - c) = s^L`,
/// with `L` clearing the denominators of `rs`: then every power is rational.
pub fn kummer_transport(rs: &[Q; 2], p: [[i64; 2]; 2], s: &Q) -> Vec<Q> {
    let big_l = rs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let power = |r: &Q| {
        let e = (r * Q::from_integer(big_l.clone())).to_integer().to_i32().expect("small exponent");
        if e >= 0 {
            num_traits::pow(s.clone(), e as usize)
        } else {
            num_traits::pow(s.recip(), (-e) as usize)
        }
    };
    let d = [power(&rs[0]), power(&rs[1])];
    let pinv = [[p[1][1], -p[0][1]], [-p[1][0], p[0][0]]];
    (0..4).map(|k| (0..2).fold(Q::zero(), |acc, l| acc + q(p[k / 2][l] * pinv[l][k % 2]) * &d[l])).collect()
}

/// `Γ C` for a constant matrix `C`, both flattened row-major.
pub fn times_constant(gamma: &MatSeries, c: &[Q], n: usize) -> MatSeries {
    gamma
        .iter()
        .map(|m| (0..n * n).map(|k| (0..n).fold(Q::zero(), |acc, l| acc + &m[(k / n) * n + l] * &c[l * n + k % n])).collect())
        .collect()
}

pub fn to_q(a: &Nf) -> Q {
    a.as_rational().expect("rational constant")
}

/// `P(t, Γ)` as a series at `a`, for a relation with rational coefficients.
pub fn relation_on_series(p: &KMultiPoly, vars: &[Var], n: usize, a: &Q, gamma: &MatSeries) -> Vec<Q> {
    let len = gamma.len();
    let entry = |r: usize, c: usize| -> Vec<Q> { gamma.iter().map(|m| m[r * n + c].clone()).collect() };
    let mut out = vec![Q::zero(); len];
    for (mono, coef) in p.terms() {
        let num: Upoly = coef.num().coeffs().iter().map(to_q).collect();
        let den: Upoly = coef.den().coeffs().iter().map(to_q).collect();
        let mut term = series_div(&shift(&num, a), &shift(&den, a), len);
        for (k, &e) in mono.iter().enumerate() {
            let Var::X(r, c) = vars[k] else { panic!("unexpected variable {:?}", vars[k]) };
            for _ in 0..e {
                term = series_mul(&term, &entry(r, c), len);
            }
        }
        for (o, t) in out.iter_mut().zip(term) {
            *o += t;
        }
    }
    out
}

/// For `diag(r_i / t)` systems: `{diag(w^{k L r_i}) : k}` with `L` the lcm of
/// denominators and `w` any primitive `L`-th root of unity. Checks the points
/// against that set, finding `w` among products of their coordinates.
pub fn matches_exponent_lattice(points: &[CMatrix], rs: &[Q]) -> Result<(), String> {
    let big_l = rs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom())).to_u64().unwrap();
    if points.len() as u64 != big_l {
        return Err(format!("expected {big_l} points, got {}", points.len()));
    }
    let n = rs.len();
    if points.iter().any(|p| (0..n).any(|i| (0..n).any(|j| i != j && !p[(i, j)].is_zero()))) {
        return Err("a point is not diagonal".into());
    }
    let pow = |x: &Nf, e: u64| (0..e).fold(Nf::one(), |acc, _| acc * x.clone());
    let order = |x: &Nf| (1..=big_l).find(|&e| pow(x, e).is_one());
    // closure of the coordinates under products
    let mut roots: Vec<Nf> = vec![Nf::one()];
    let coords: Vec<Nf> = points.iter().flat_map(|p| (0..n).map(|i| p[(i, i)].clone()).collect::<Vec<_>>()).collect();
    loop {
        let before = roots.len();
        for c in &coords {
            for r in roots.clone() {
                let v = r * c.clone();
                if !roots.contains(&v) {
                    roots.push(v);
                }
            }
        }
        if roots.len() == before || roots.len() as u64 > big_l {
            break;
        }
    }
    let w = roots.iter().find(|x| order(x) == Some(big_l)).ok_or("no primitive root among the coordinates")?;
    for k in 0..big_l {
        let want: Vec<Nf> = rs
            .iter()
            .map(|r| {
                let e = (r * Q::from_integer(BigInt::from(k * big_l))).to_integer().mod_floor(&BigInt::from(big_l));
                pow(w, e.to_u64().unwrap())
            })
            .collect();
        if !points.iter().any(|p| (0..n).all(|i| p[(i, i)] == want[i])) {
            return Err(format!("oracle element for k = {k} is missing"));
        }
    }
    Ok(())
}

pub fn abs_i64(x: &Q) -> i64 {
    x.abs().to_integer().to_i64().unwrap_or(i64::MAX)
}
