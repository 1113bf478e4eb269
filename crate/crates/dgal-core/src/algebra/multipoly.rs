//! Sparse multivariate polynomials over a field.

use super::field::Field;
use super::poly::push_term;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// A polynomial variable. Indices are zero-based and print one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Matrix entry `x_{i}_{j}`.
    X(usize, usize),
    /// Auxiliary `y_i`.
    Y(usize),
    /// Second matrix copy `w_{i}_{j}`, used for product-ring computations.
    W(usize, usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::X(i, j) => write!(f, "x_{}_{}", i + 1, j + 1),
            Var::Y(i) => write!(f, "y_{}", i + 1),
            Var::W(i, j) => write!(f, "w_{}_{}", i + 1, j + 1),
        }
    }
}

/// Admissible monomial orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonoOrder {
    Grevlex,
    Lex,
    /// Grevlex on the first `k` variables, ties broken by grevlex on the rest.
    /// Eliminates the first block.
    Block(usize),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl MonoOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            MonoOrder::Grevlex => grevlex(a, b),
            MonoOrder::Lex => a.cmp(b),
            MonoOrder::Block(k) => grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..])),
        }
    }
}

/// Ordered variable list together with a monomial order.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<Var>,
    order: MonoOrder,
}

impl Ring {
    pub fn new(vars: Vec<Var>, order: MonoOrder) -> Arc<Ring> {
        Arc::new(Ring { vars, order })
    }

    /// `x_{i}_{j}` for an `n x n` matrix, row major, grevlex.
    pub fn matrix(n: usize) -> Arc<Ring> {
        Self::new(matrix_vars(n), MonoOrder::Grevlex)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn order(&self) -> MonoOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.vars.iter().position(|&w| w == v)
    }

    pub fn with_order(&self, order: MonoOrder) -> Arc<Ring> {
        Self::new(self.vars.clone(), order)
    }
}

pub fn matrix_vars(n: usize) -> Vec<Var> {
    (0..n).flat_map(|i| (0..n).map(move |j| Var::X(i, j))).collect()
}

pub type Mono = Vec<u32>;

/// Sparse polynomial with terms sorted by decreasing monomial in the ring order.
#[derive(Clone)]
pub struct MultiPoly<F> {
    ring: Arc<Ring>,
    terms: Vec<(Mono, F)>,
    degree: u32,
}

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        MultiPoly { ring: ring.clone(), terms: Vec::new(), degree: 0 }
    }

    pub fn constant(ring: &Arc<Ring>, a: F) -> Self {
        Self::from_terms(ring, vec![(vec![0; ring.nvars()], a)])
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, F::one())
    }

    pub fn var(ring: &Arc<Ring>, v: Var) -> Self {
        let k = ring.index_of(v).unwrap_or_else(|| panic!("variable {v} not in ring"));
        let mut m = vec![0; ring.nvars()];
        m[k] = 1;
        Self::from_terms(ring, vec![(m, F::one())])
    }

    pub fn var_at(ring: &Arc<Ring>, k: usize) -> Self {
        Self::var(ring, ring.vars[k])
    }

    /// Combines like terms, drops zeros and sorts.
    pub fn from_terms(ring: &Arc<Ring>, terms: Vec<(Mono, F)>) -> Self {
        let mut acc: HashMap<Mono, F> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.len(), ring.nvars());
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(e) => *e = e.clone() + c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self::from_sorted_unchecked(ring, terms, true)
    }

    fn from_sorted_unchecked(ring: &Arc<Ring>, mut terms: Vec<(Mono, F)>, sort: bool) -> Self {
        if sort {
            let ord = ring.order;
            terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        }
        let degree = terms.iter().map(|(m, _)| m.iter().sum::<u32>()).max().unwrap_or(0);
        MultiPoly { ring: ring.clone(), terms, degree }
    }

    /// `self` minus its leading term.
    pub fn drop_leading(mut self) -> Self {
        if !self.terms.is_empty() {
            self.terms.remove(0);
            self.degree = self.terms.iter().map(|(m, _)| m.iter().sum::<u32>()).max().unwrap_or(0);
        }
        self
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Mono, F)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, F)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Cached total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_constant(&self) -> bool {
        self.degree == 0
    }

    pub fn constant_term(&self) -> F {
        match self.terms.last() {
            Some((m, c)) if m.iter().all(|&e| e == 0) => c.clone(),
            _ => F::zero(),
        }
    }

    pub fn lm(&self) -> Option<&Mono> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lc(&self) -> F {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(F::zero)
    }

    pub fn coeff(&self, m: &[u32]) -> F {
        self.terms.iter().find(|(k, _)| k.as_slice() == m).map(|t| t.1.clone()).unwrap_or_else(F::zero)
    }

    pub fn monic(&self) -> Self {
        let l = self.lc();
        if l.is_zero() || l.is_one() {
            return self.clone();
        }
        self.scale(&l.inv())
    }

    pub fn scale(&self, a: &F) -> Self {
        if a.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * a.clone())).collect();
        Self::from_sorted_unchecked(&self.ring, terms, false)
    }

    /// `a * mono * self`.
    pub fn mul_term(&self, mono: &[u32], a: &F) -> Self {
        if a.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.iter().zip(mono).map(|(x, y)| x + y).collect(), c.clone() * a.clone()))
            .collect();
        Self::from_sorted_unchecked(&self.ring, terms, false)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Variables that occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&k| self.terms.iter().any(|(m, _)| m[k] > 0)).collect()
    }

    pub fn degree_in(&self, k: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m[k]).max().unwrap_or(0)
    }

    /// Evaluate at a point given in ring-variable order.
    pub fn eval(&self, point: &[F]) -> F {
        self.terms.iter().fold(F::zero(), |acc, (m, c)| {
            let v = m.iter().zip(point).filter(|(e, _)| **e > 0).fold(c.clone(), |p, (e, x)| p * x.pow(*e as u64));
            acc + v
        })
    }

    /// Replace every variable `k` by `images[k]` (polynomials in `target`).
    pub fn substitute(&self, images: &[MultiPoly<F>], target: &Arc<Ring>) -> MultiPoly<F> {
        assert_eq!(images.len(), self.ring.nvars());
        let mut cache: HashMap<(usize, u32), MultiPoly<F>> = HashMap::new();
        let mut acc = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (k, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache.entry((k, e)).or_insert_with(|| images[k].pow(e)).clone();
                t = &t * &p;
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Re-express in another ring containing all occurring variables.
    pub fn embed(&self, target: &Arc<Ring>) -> MultiPoly<F> {
        if Arc::ptr_eq(&self.ring, target) || *self.ring == **target {
            return MultiPoly { ring: target.clone(), ..self.clone() };
        }
        let idx: Vec<Option<usize>> = self.ring.vars.iter().map(|&v| target.index_of(v)).collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = vec![0; target.nvars()];
                for (k, &e) in m.iter().enumerate() {
                    if e > 0 {
                        let j = idx[k].unwrap_or_else(|| panic!("variable {} missing in target ring", self.ring.vars[k]));
                        out[j] = e;
                    }
                }
                (out, c.clone())
            })
            .collect();
        Self::from_terms(target, terms)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> MultiPoly<G> {
        MultiPoly::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect())
    }

    pub fn render_mono(ring: &Ring, m: &[u32]) -> String {
        let mut parts = Vec::new();
        for (k, &e) in m.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(ring.vars[k].to_string()),
                _ => parts.push(format!("{}^{}", ring.vars[k], e)),
            }
        }
        parts.join("*")
    }

    /// Canonical text form.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (m, c) in &self.terms {
            push_term(&mut s, c, &Self::render_mono(&self.ring, m));
        }
        s
    }
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn merge<F: Field>(a: &MultiPoly<F>, b: &MultiPoly<F>, negate_b: bool) -> MultiPoly<F> {
    debug_assert!(Arc::ptr_eq(&a.ring, &b.ring) || a.ring == b.ring, "ring mismatch");
    let ord = a.ring.order;
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    let nb = |c: &F| if negate_b { -c.clone() } else { c.clone() };
    while i < a.terms.len() && j < b.terms.len() {
        match ord.cmp(&a.terms[i].0, &b.terms[j].0) {
            Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((b.terms[j].0.clone(), nb(&b.terms[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = a.terms[i].1.clone() + nb(&b.terms[j].1);
                if !c.is_zero() {
                    out.push((a.terms[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(b.terms[j..].iter().map(|(m, c)| (m.clone(), nb(c))));
    MultiPoly::from_sorted_unchecked(&a.ring, out, false)
}

impl<F: Field> std::ops::Add for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, o: &MultiPoly<F>) -> MultiPoly<F> {
        merge(self, o, false)
    }
}

impl<F: Field> std::ops::Sub for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, o: &MultiPoly<F>) -> MultiPoly<F> {
        merge(self, o, true)
    }
}

impl<F: Field> std::ops::Neg for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        self.scale(&-F::one())
    }
}

impl<F: Field> std::ops::Mul for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, o: &MultiPoly<F>) -> MultiPoly<F> {
        if self.is_zero() || o.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                terms.push((m1.iter().zip(m2).map(|(x, y)| x + y).collect(), c1.clone() * c2.clone()));
            }
        }
        MultiPoly::from_terms(&self.ring, terms)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl<F: Field> std::ops::$tr for MultiPoly<F> {
            type Output = MultiPoly<F>;
            fn $f(self, o: MultiPoly<F>) -> MultiPoly<F> {
                (&self).$f(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// Does `a` divide `b`?
pub fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_div(b: &[u32], a: &[u32]) -> Mono {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

/// All exponent vectors in `nvars` variables of total degree at most `d`,
/// constant first, then by degree, lexicographically decreasing within a degree.
pub fn monomials_upto(nvars: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut cur = vec![0u32; nvars];
        fill(&mut cur, 0, deg, &mut out);
    }
    out
}

fn fill(cur: &mut Vec<u32>, k: usize, rem: u32, out: &mut Vec<Mono>) {
    if k + 1 == cur.len() {
        cur[k] = rem;
        out.push(cur.clone());
        cur[k] = 0;
        return;
    }
    if cur.is_empty() {
        if rem == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in (0..=rem).rev() {
        cur[k] = e;
        fill(cur, k + 1, rem - e, out);
    }
    cur[k] = 0;
}
