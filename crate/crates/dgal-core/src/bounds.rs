//! Degree-bound towers as expression trees.
//!
//! Values are evaluated exactly when the estimated size is under a bit cap;
//! otherwise (and always, as a cross-check) as a bracket `[lower, upper]` where
//! each end is an iterated logarithm `log2^[level](x)` stored in an `f64` with
//! outward rounding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("no Jordan bound configured for n = {0}; pass an override")]
    JordanUncovered(String),
    #[error("cannot parse bound expression at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("bracket evaluation left its supported range: {0}")]
    Range(String),
}

/// Expression tree over nonnegative-valued integer operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundExpr {
    Lit(BigInt),
    Add(Box<BoundExpr>, Box<BoundExpr>),
    Mul(Box<BoundExpr>, Box<BoundExpr>),
    Pow(Box<BoundExpr>, Box<BoundExpr>),
    /// `ceil(a / b)`.
    CeilDiv(Box<BoundExpr>, Box<BoundExpr>),
    Factorial(Box<BoundExpr>),
    Binomial(Box<BoundExpr>, Box<BoundExpr>),
    /// `max_i C(m, i) = C(m, floor(m/2))`.
    CentralBinomMax(Box<BoundExpr>),
    Max(Vec<BoundExpr>),
    /// Jordan bound of the argument, looked up in [`BoundConfig`].
    Jordan(Box<BoundExpr>),
}

use BoundExpr::*;

pub fn lit(v: i64) -> BoundExpr {
    Lit(BigInt::from(v))
}

fn b(e: BoundExpr) -> Box<BoundExpr> {
    Box::new(e)
}

// builder methods, not operators: the variants already own the names
#[allow(clippy::should_implement_trait)]
impl BoundExpr {
    pub fn add(self, o: BoundExpr) -> Self {
        Add(b(self), b(o))
    }
    pub fn mul(self, o: BoundExpr) -> Self {
        Mul(b(self), b(o))
    }
    pub fn pow(self, o: BoundExpr) -> Self {
        Pow(b(self), b(o))
    }
    pub fn ceil_div(self, o: BoundExpr) -> Self {
        CeilDiv(b(self), b(o))
    }
    pub fn factorial(self) -> Self {
        Factorial(b(self))
    }
    pub fn binom(self, k: BoundExpr) -> Self {
        Binomial(b(self), b(k))
    }
    pub fn central_binom_max(self) -> Self {
        CentralBinomMax(b(self))
    }
    pub fn jordan(self) -> Self {
        Jordan(b(self))
    }
    pub fn square(self) -> Self {
        self.pow(lit(2))
    }

    /// Function-call syntax, e.g. `pow(add(1, 2), 3)`; inverse of [`BoundExpr::parse`].
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn parse(src: &str) -> Result<Self, BoundError> {
        let mut p = ExprParser { s: src.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    /// Multi-line rendering that names repeated subtrees.
    pub fn tower(&self) -> String {
        let mut lines = Vec::new();
        let mut names: BTreeMap<String, String> = BTreeMap::new();
        let top = self.tower_rec(&mut lines, &mut names);
        lines.push(format!("value = {top}"));
        lines.join("\n")
    }

    fn tower_rec(&self, lines: &mut Vec<String>, names: &mut BTreeMap<String, String>) -> String {
        let kids: Vec<&BoundExpr> = match self {
            Lit(v) => return v.to_string(),
            Add(x, y) | Mul(x, y) | Pow(x, y) | CeilDiv(x, y) | Binomial(x, y) => vec![x, y],
            Factorial(x) | CentralBinomMax(x) | Jordan(x) => vec![x],
            Max(xs) => xs.iter().collect(),
        };
        let args: Vec<String> = kids.iter().map(|k| k.tower_rec(lines, names)).collect();
        let text = format!("{}({})", self.head(), args.join(", "));
        if text.len() <= 40 {
            return text;
        }
        if let Some(n) = names.get(&text) {
            return n.clone();
        }
        let name = format!("e{}", names.len() + 1);
        lines.push(format!("{name} = {text}"));
        names.insert(text, name.clone());
        name
    }

    fn head(&self) -> &'static str {
        match self {
            Lit(_) => "",
            Add(..) => "add",
            Mul(..) => "mul",
            Pow(..) => "pow",
            CeilDiv(..) => "ceildiv",
            Factorial(_) => "fact",
            Binomial(..) => "binom",
            CentralBinomMax(_) => "cbmax",
            Max(_) => "max",
            Jordan(_) => "jordan",
        }
    }
}

impl fmt::Display for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lit(v) => write!(f, "{v}"),
            Add(x, y) | Mul(x, y) | Pow(x, y) | CeilDiv(x, y) | Binomial(x, y) => write!(f, "{}({x}, {y})", self.head()),
            Factorial(x) | CentralBinomMax(x) | Jordan(x) => write!(f, "{}({x})", self.head()),
            Max(xs) => {
                write!(f, "max(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct ExprParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> BoundError {
        BoundError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), BoundError> {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<BoundExpr, BoundError> {
        self.ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        if word.is_empty() {
            return Err(self.err("expected an expression"));
        }
        if let Ok(v) = word.parse::<BigInt>() {
            return Ok(Lit(v));
        }
        self.expect(b'(')?;
        let mut args = vec![self.expr()?];
        loop {
            self.ws();
            if self.s.get(self.pos) == Some(&b',') {
                self.pos += 1;
                args.push(self.expr()?);
            } else {
                break;
            }
        }
        self.expect(b')')?;
        let arity = |k: usize, p: &Self| if args.len() == k { Ok(()) } else { Err(p.err(&format!("`{word}` takes {k} arguments"))) };
        let mut it = args.clone().into_iter();
        let mut next = || b(it.next().expect("arity checked"));
        Ok(match word {
            "add" => arity(2, self).map(|_| Add(next(), next()))?,
            "mul" => arity(2, self).map(|_| Mul(next(), next()))?,
            "pow" => arity(2, self).map(|_| Pow(next(), next()))?,
            "ceildiv" => arity(2, self).map(|_| CeilDiv(next(), next()))?,
            "binom" => arity(2, self).map(|_| Binomial(next(), next()))?,
            "fact" => arity(1, self).map(|_| Factorial(next()))?,
            "cbmax" => arity(1, self).map(|_| CentralBinomMax(next()))?,
            "jordan" => arity(1, self).map(|_| Jordan(next()))?,
            "max" => Max(args),
            _ => return Err(self.err(&format!("unknown function `{word}`"))),
        })
    }
}

/// Evaluation settings.
#[derive(Clone, Debug)]
pub struct BoundConfig {
    /// Exact evaluation only when the value has at most this many bits.
    pub exact_bit_cap: u64,
    /// Jordan bounds replacing or extending the built-in table.
    pub jordan_overrides: BTreeMap<u64, BigInt>,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig { exact_bit_cap: 1 << 20, jordan_overrides: BTreeMap::new() }
    }
}

/// Where a Jordan bound came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JordanSource {
    Table,
    FactorialRule,
    Override,
}

/// Built-in table for small `n`, `(n+1)!` from 71 on, overrides first.
pub fn jordan_value(n: u64, cfg: &BoundConfig) -> Result<(BigInt, JordanSource), BoundError> {
    if let Some(v) = cfg.jordan_overrides.get(&n) {
        return Ok((v.clone(), JordanSource::Override));
    }
    let table = [(1u64, 1i64), (2, 60), (3, 360), (4, 25920)];
    if let Some(&(_, v)) = table.iter().find(|(k, _)| *k == n) {
        return Ok((BigInt::from(v), JordanSource::Table));
    }
    if n >= 71 {
        return Ok((factorial_exact(n + 1), JordanSource::FactorialRule));
    }
    Err(BoundError::JordanUncovered(n.to_string()))
}

fn factorial_exact(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn binom_exact(m: &BigInt, k: &BigInt) -> BigInt {
    if k.is_negative() || k > m {
        return BigInt::zero();
    }
    let k = std::cmp::min(k.clone(), m - k);
    let k = k.to_u64().expect("binomial lower index fits u64");
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (m - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

/// `log2^[level](x) = v`, the level chosen so that `v` stays below `2^LIMIT`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TowerNum {
    pub level: u32,
    pub v: f64,
}

const LIMIT: f64 = 1000.0;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Round {
    Down,
    Up,
}

fn nudge(x: f64, r: Round) -> f64 {
    let eps = x.abs() * 1e-12 + 1e-300;
    match r {
        Round::Down => x - eps,
        Round::Up => x + eps,
    }
}

impl TowerNum {
    fn num(v: f64) -> Self {
        TowerNum { level: 0, v }
    }

    fn from_big(x: &BigInt, r: Round) -> Self {
        let bits = x.bits();
        if bits < LIMIT as u64 {
            return TowerNum::num(nudge(x.to_f64().expect("finite"), r));
        }
        let shift = bits - 60;
        let top = (x.abs() >> shift).to_f64().expect("60 bits");
        TowerNum { level: 1, v: nudge(top.log2() + shift as f64, r) }
    }

    fn normalize(mut self, r: Round) -> Self {
        loop {
            if self.v > LIMIT && self.level == 0 && self.v.is_finite() {
                let l = self.v.log2();
                if l > LIMIT {
                    self = TowerNum { level: 1, v: nudge(l, r) };
                    continue;
                }
                return self;
            }
            if self.v > (1u64 << 52) as f64 {
                self = TowerNum { level: self.level + 1, v: nudge(self.v.log2(), r) };
                continue;
            }
            if self.level > 0 && self.v < LIMIT {
                let e = nudge(self.v.exp2(), r);
                self = TowerNum { level: self.level - 1, v: e };
                continue;
            }
            return self;
        }
    }

    fn key(&self) -> (u32, f64) {
        (self.level, self.v)
    }

    fn ge(&self, o: &TowerNum) -> bool {
        let (a, b) = (self.key(), o.key());
        a.0 > b.0 || (a.0 == b.0 && a.1 >= b.1)
    }

    fn log2(self, r: Round) -> Result<Self, BoundError> {
        if self.level == 0 {
            if self.v <= 0.0 {
                return Err(BoundError::Range("logarithm of a nonpositive bound".into()));
            }
            return Ok(TowerNum::num(nudge(self.v.log2(), r)));
        }
        Ok(TowerNum { level: self.level - 1, v: self.v }.normalize(r))
    }

    fn exp2(self, r: Round) -> Self {
        if self.level == 0 && self.v < LIMIT {
            return TowerNum::num(nudge(self.v.exp2(), r)).normalize(r);
        }
        TowerNum { level: self.level + 1, v: self.v }.normalize(r)
    }

    fn add(self, o: TowerNum, r: Round) -> Self {
        let (a, b) = if self.ge(&o) { (self, o) } else { (o, self) };
        if a.level == 0 {
            return TowerNum::num(nudge(a.v + b.v, r)).normalize(r);
        }
        if a.level == 1 {
            // log2(2^v + b) = v + log2(1 + b 2^-v)
            let bl = if b.level == 0 {
                if b.v == 0.0 {
                    return a;
                }
                (b.v.abs().log2() - a.v, b.v.signum())
            } else {
                (b.v - a.v, 1.0)
            };
            let frac = bl.1 * bl.0.exp2();
            return TowerNum { level: 1, v: nudge(a.v + (1.0 + frac).log2(), r) }.normalize(r);
        }
        // at level >= 2 adding anything no larger changes v by less than an ulp-scale nudge
        TowerNum { level: a.level, v: nudge(a.v, r) }
    }

    fn mul(self, o: TowerNum, r: Round) -> Result<Self, BoundError> {
        if (self.level == 0 && self.v == 0.0) || (o.level == 0 && o.v == 0.0) {
            return Ok(TowerNum::num(0.0));
        }
        if self.level == 0 && o.level == 0 && (self.v * o.v).abs() < LIMIT.exp2() {
            return Ok(TowerNum::num(nudge(self.v * o.v, r)).normalize(r));
        }
        Ok(self.log2(r)?.add(o.log2(r)?, r).exp2(r))
    }

    fn pow(self, e: TowerNum, r: Round) -> Result<Self, BoundError> {
        if e.level == 0 && e.v == 0.0 {
            return Ok(TowerNum::num(1.0));
        }
        if self.level == 0 && self.v <= 1.0 {
            return Ok(TowerNum::num(nudge(self.v.max(0.0), r)));
        }
        Ok(e.mul(self.log2(r)?, r)?.exp2(r))
    }

    /// Upper bound on the number of bits.
    fn bits(self) -> Option<u64> {
        match self.level {
            0 => Some(self.v.max(1.0).log2().ceil() as u64 + 1),
            1 if self.v < 1e18 => Some(self.v.ceil() as u64 + 1),
            _ => None,
        }
    }
}

impl fmt::Display for TowerNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            0 => write!(f, "{:.6e}", self.v),
            1 => write!(f, "2^{:.6}", self.v),
            k => write!(f, "log2^[{k}] = {:.6}", self.v),
        }
    }
}

/// Certified enclosure of a value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lower: TowerNum,
    pub upper: TowerNum,
}

impl Bracket {
    /// `[lo, hi]` on `log2(x)`, available while both ends sit at level <= 2.
    pub fn log2_bounds(&self) -> Option<(f64, f64)> {
        let to_log = |t: TowerNum, r: Round| -> Option<f64> {
            match t.level {
                0 => Some(nudge(t.v.max(f64::MIN_POSITIVE).log2(), r)),
                1 => Some(t.v),
                2 if t.v < 1000.0 => Some(nudge(t.v.exp2(), r)),
                _ => None,
            }
        };
        Some((to_log(self.lower, Round::Down)?, to_log(self.upper, Round::Up)?))
    }

    /// Does the bracket contain this integer?
    pub fn contains(&self, x: &BigInt) -> bool {
        let lo = TowerNum::from_big(x, Round::Up);
        let hi = TowerNum::from_big(x, Round::Down);
        lo.ge(&self.lower) && self.upper.ge(&hi)
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log2_bounds() {
            Some((lo, hi)) => write!(f, "log2 in [{lo:.6}, {hi:.6}]"),
            None => write!(f, "[{}, {}]", self.lower, self.upper),
        }
    }
}

/// Exact value if small enough, and a bracket always.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub exact: Option<BigInt>,
    pub bracket: Bracket,
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(v) if v.bits() <= 128 => write!(f, "{v}"),
            Some(v) => write!(f, "exact ({} bits), {}", v.bits(), self.bracket),
            None => write!(f, "{}", self.bracket),
        }
    }
}

fn log2_e() -> f64 {
    std::f64::consts::LOG2_E
}

impl BoundExpr {
    /// Certified bracket by monotone interval arithmetic.
    pub fn bracket(&self, cfg: &BoundConfig) -> Result<Bracket, BoundError> {
        use Round::*;
        Ok(match self {
            Lit(v) => Bracket { lower: TowerNum::from_big(v, Down), upper: TowerNum::from_big(v, Up) },
            Add(x, y) => {
                let (a, c) = (x.bracket(cfg)?, y.bracket(cfg)?);
                Bracket { lower: a.lower.add(c.lower, Down), upper: a.upper.add(c.upper, Up) }
            }
            Mul(x, y) => {
                let (a, c) = (x.bracket(cfg)?, y.bracket(cfg)?);
                Bracket { lower: a.lower.mul(c.lower, Down)?, upper: a.upper.mul(c.upper, Up)? }
            }
            Pow(x, y) => {
                let (a, c) = (x.bracket(cfg)?, y.bracket(cfg)?);
                let one = TowerNum::num(1.0);
                if a.lower.ge(&one) {
                    Bracket { lower: a.lower.pow(c.lower, Down)?, upper: a.upper.pow(c.upper, Up)? }
                } else {
                    // integer base 0 is possible, and 0^y is 0 or 1
                    let upper = if a.upper.ge(&one) { max_t(one, a.upper.pow(c.upper, Up)?) } else { one };
                    Bracket { lower: TowerNum::num(0.0), upper }
                }
            }
            CeilDiv(x, y) => {
                let (a, c) = (x.bracket(cfg)?, y.bracket(cfg)?);
                if c.lower.level > 0 || c.upper.level > 0 || c.lower.v <= 0.0 {
                    return Err(BoundError::Range("divisor outside the supported range".into()));
                }
                let inv = |t: TowerNum, r| TowerNum::num(nudge(1.0 / t.v, r));
                Bracket {
                    lower: a.lower.mul(inv(c.upper, Down), Down)?,
                    upper: a.upper.mul(inv(c.lower, Up), Up)?.add(TowerNum::num(1.0), Up),
                }
            }
            Factorial(x) => {
                let a = x.bracket(cfg)?;
                Bracket { lower: factorial_lower(a.lower)?, upper: factorial_upper(a.upper)? }
            }
            Binomial(m, k) => {
                let (a, c) = (m.bracket(cfg)?, k.bracket(cfg)?);
                binomial_bracket(a, c)?
            }
            CentralBinomMax(m) => {
                let a = m.bracket(cfg)?;
                // 2^m / (m+1) <= C(m, m/2) <= 2^m
                let lower = if a.lower.level == 0 && a.lower.v < 1.0 {
                    TowerNum::num(1.0)
                } else {
                    let m1 = a.lower.add(TowerNum::num(1.0), Up);
                    let neg = m1.log2(Up)?;
                    let diff = sub_small(a.lower, neg)?;
                    diff.exp2(Down).add(TowerNum::num(0.0), Down)
                };
                Bracket { lower: max_t(lower, TowerNum::num(1.0)), upper: a.upper.exp2(Up) }
            }
            Max(xs) => {
                let bs: Vec<Bracket> = xs.iter().map(|x| x.bracket(cfg)).collect::<Result<_, _>>()?;
                let first = bs.first().ok_or_else(|| BoundError::Range("empty max".into()))?;
                bs.iter().skip(1).fold(*first, |acc, b| Bracket { lower: max_t(acc.lower, b.lower), upper: max_t(acc.upper, b.upper) })
            }
            Jordan(x) => {
                let a = x.bracket(cfg)?;
                if let (Some(lo), Some(hi)) = (small_int(a.lower, Round::Up), small_int(a.upper, Round::Down)) {
                    if lo == hi {
                        let (v, _) = jordan_value(lo, cfg)?;
                        return Ok(Bracket { lower: TowerNum::from_big(&v, Down), upper: TowerNum::from_big(&v, Up) });
                    }
                }
                if !a.lower.ge(&TowerNum::num(71.0)) || !cfg.jordan_overrides.is_empty() && a.lower.level == 0 {
                    return Err(BoundError::JordanUncovered(format!("an argument in {a}")));
                }
                let one = TowerNum::num(1.0);
                Bracket { lower: factorial_lower(a.lower.add(one, Down))?, upper: factorial_upper(a.upper.add(one, Up))? }
            }
        })
    }

    /// Exact value under the bit cap, plus the bracket.
    pub fn evaluate(&self, cfg: &BoundConfig) -> Result<Evaluation, BoundError> {
        let bracket = self.bracket(cfg)?;
        let exact = self.exact(cfg)?;
        Ok(Evaluation { exact, bracket })
    }

    fn exact(&self, cfg: &BoundConfig) -> Result<Option<BigInt>, BoundError> {
        let br = self.bracket(cfg)?;
        match br.upper.bits() {
            Some(bits) if bits <= cfg.exact_bit_cap => {}
            _ => return Ok(None),
        }
        let two = |x: &BoundExpr, y: &BoundExpr| -> Result<Option<(BigInt, BigInt)>, BoundError> {
            Ok(match (x.exact(cfg)?, y.exact(cfg)?) {
                (Some(a), Some(c)) => Some((a, c)),
                _ => None,
            })
        };
        Ok(match self {
            Lit(v) => Some(v.clone()),
            Add(x, y) => two(x, y)?.map(|(a, c)| a + c),
            Mul(x, y) => two(x, y)?.map(|(a, c)| a * c),
            Pow(x, y) => two(x, y)?.map(|(a, c)| num_traits::pow(a, c.to_usize().expect("exponent fits"))),
            CeilDiv(x, y) => two(x, y)?.map(|(a, c)| a.div_ceil(&c)),
            Factorial(x) => x.exact(cfg)?.map(|a| factorial_exact(a.to_u64().expect("factorial argument fits"))),
            Binomial(m, k) => two(m, k)?.map(|(a, c)| binom_exact(&a, &c)),
            CentralBinomMax(m) => m.exact(cfg)?.map(|a| {
                let half = &a / 2;
                binom_exact(&a, &half)
            }),
            Max(xs) => {
                let vals: Option<Vec<BigInt>> = xs.iter().map(|x| x.exact(cfg)).collect::<Result<Vec<_>, _>>()?.into_iter().collect();
                vals.and_then(|v| v.into_iter().max())
            }
            Jordan(x) => match x.exact(cfg)? {
                Some(a) => Some(jordan_value(a.to_u64().ok_or_else(|| BoundError::Range("Jordan argument".into()))?, cfg)?.0),
                None => None,
            },
        })
    }
}

fn small_int(t: TowerNum, r: Round) -> Option<u64> {
    if t.level != 0 || t.v > 1e15 {
        return None;
    }
    Some(match r {
        Round::Up => t.v.ceil() as u64,
        Round::Down => t.v.floor() as u64,
    })
}

fn max_t(a: TowerNum, c: TowerNum) -> TowerNum {
    if a.ge(&c) {
        a
    } else {
        c
    }
}

/// `a - s` rounded down, for `s <= a / 2` or both small.
fn sub_small(a: TowerNum, s: TowerNum) -> Result<TowerNum, BoundError> {
    if a.level == 0 && s.level == 0 {
        return Ok(TowerNum::num(nudge(a.v - s.v, Round::Down)));
    }
    if s.level == 0 {
        return Ok(a.add(TowerNum::num(-s.v), Round::Down));
    }
    let half = a.log2(Round::Down)?.add(TowerNum::num(-1.0), Round::Down).exp2(Round::Down);
    if !half.ge(&s) {
        return Err(BoundError::Range("subtraction of a comparable quantity".into()));
    }
    Ok(half)
}

/// `n! >= (n/e)^n`.
fn factorial_lower(n: TowerNum) -> Result<TowerNum, BoundError> {
    if n.level == 0 && n.v < 3.0 {
        return Ok(TowerNum::num(1.0));
    }
    let ln = n.log2(Round::Down)?;
    let per = sub_small(ln, TowerNum::num(log2_e() + 1e-9)).unwrap_or(TowerNum::num(0.0));
    let per = max_t(per, TowerNum::num(0.0));
    Ok(max_t(n.mul(per, Round::Down)?.exp2(Round::Down), TowerNum::num(1.0)))
}

/// `n! <= n^n`.
fn factorial_upper(n: TowerNum) -> Result<TowerNum, BoundError> {
    if n.level == 0 && n.v < 2.0 {
        return Ok(TowerNum::num(2.0));
    }
    n.pow(n, Round::Up)
}

/// `(m-k+1)^k / k! <= C(m, k) <= min(2^m, m^k / k!)` for a known small `k`.
fn binomial_bracket(m: Bracket, k: Bracket) -> Result<Bracket, BoundError> {
    use Round::*;
    let ks = small_int(k.lower, Up).zip(small_int(k.upper, Down)).filter(|(lo, hi)| lo == hi && *lo <= 1 << 20);
    let mut upper = m.upper.exp2(Up);
    let Some((k, _)) = ks else {
        return Ok(Bracket { lower: TowerNum::num(0.0), upper });
    };
    if k == 0 {
        return Ok(Bracket { lower: TowerNum::num(1.0), upper: TowerNum::num(1.0) });
    }
    let lfact: f64 = (2..=k).map(|i| (i as f64).log2()).sum();
    let kf = TowerNum::num(k as f64);
    let base = sub_small(m.lower, TowerNum::num(k as f64 - 1.0))?;
    let lower = if base.ge(&TowerNum::num(1.0)) {
        kf.mul(base.log2(Down)?, Down)?.add(TowerNum::num(-nudge(lfact, Up)), Down).exp2(Down)
    } else {
        TowerNum::num(0.0)
    };
    let alt = kf.mul(m.upper.log2(Up)?, Up)?.add(TowerNum::num(-nudge(lfact, Down)), Up).exp2(Up);
    if upper.ge(&alt) {
        upper = alt;
    }
    Ok(Bracket { lower, upper })
}

/// `gamma(n, d) = 2 (d^2/2 + d)^(2^(n-1))`, rounded up to an integer.
pub fn gamma_bound(n: u32, d: u32) -> BoundExpr {
    let e = lit(2).pow(lit(n as i64 - 1));
    let base = lit(d as i64 * d as i64 + 2 * d as i64);
    lit(2).mul(base.pow(e.clone())).ceil_div(lit(2).pow(e))
}

/// `(2 n^3 + 1)^(8^(n^2))`.
pub fn unipotent_family_bound(n: u32) -> BoundExpr {
    let n = n as i64;
    lit(2 * n * n * n + 1).pow(lit(8).pow(lit(n * n)))
}

/// `(d*, n*)` with `d* = max_i C(C(n^2+d, d), i)^2`, `n* = d* d C(n^2+d, d)`.
pub fn dstar_nstar(n: u32, d: u32) -> (BoundExpr, BoundExpr) {
    let (n, d) = (n as i64, d as i64);
    let c = lit(n * n + d).binom(lit(d));
    let dstar = c.clone().central_binom_max().square();
    let nstar = dstar.clone().mul(lit(d)).mul(c);
    (dstar, nstar)
}

/// `(d + 1)^(2^(mu^2 + n^2))`: image degree bound for a morphism.
pub fn image_bound(dbar: BoundExpr, mu: BoundExpr, n: u32) -> BoundExpr {
    let n2 = lit(n as i64 * n as i64);
    dbar.add(lit(1)).pow(lit(2).pow(mu.square().add(n2)))
}

/// `(κ1, κ2, κ3)`.
pub fn kappas(n: u32) -> (BoundExpr, BoundExpr, BoundExpr) {
    let n2 = lit(n as i64 * n as i64);
    let u = unipotent_family_bound(n);
    let c = n2.clone().add(u.clone()).binom(n2);
    let k1 = c.clone().central_binom_max().square();
    let k2 = k1.clone().mul(u).mul(c);
    let m = k1.clone().square().add(lit(1));
    let k3 = k2.clone().mul(m.clone()).mul(m.central_binom_max());
    (k1, k2, k3)
}

pub fn jordan_bound(n: u32) -> BoundExpr {
    lit(n as i64).jordan()
}

/// `I(n) = J(max_i C(κ1^2 + 1, i))`.
pub fn component_bound(n: u32) -> BoundExpr {
    let (k1, _, _) = kappas(n);
    k1.square().add(lit(1)).central_binom_max().jordan()
}

/// `d̃ = κ3^(I(n) - 1)`.
pub fn proto_galois_degree_bound(n: u32) -> BoundExpr {
    let (_, _, k3) = kappas(n);
    k3.pow(component_bound(n).add(lit(-1)))
}

/// Named bounds for a dimension, in display order.
pub fn named_bounds(n: u32, d: u32) -> Vec<(String, BoundExpr)> {
    let (ds, ns) = dstar_nstar(n, d);
    let (k1, k2, k3) = kappas(n);
    vec![
        (format!("gamma({n},{d})"), gamma_bound(n, d)),
        (format!("unipotent({n})"), unipotent_family_bound(n)),
        (format!("dstar({n},{d})"), ds),
        (format!("nstar({n},{d})"), ns),
        (format!("kappa1({n})"), k1),
        (format!("kappa2({n})"), k2),
        (format!("kappa3({n})"), k3),
        (format!("jordan({n})"), jordan_bound(n)),
        (format!("I({n})"), component_bound(n)),
        (format!("dtilde({n})"), proto_galois_degree_bound(n)),
    ]
}
