//! Padé-type reconstruction of rational functions from truncated series.

use super::field::Field;
use super::poly::Poly;
use super::ratfunc::RatFunc;

/// `p/q` in `u = t - a` with `deg p, deg q <= deg` and `q s = p mod u^len`,
/// returned in the variable `t`. `None` if no such fraction with `q(0) != 0` exists.
pub fn rational_reconstruction<F: Field>(series: &[F], point: &F, deg: usize) -> Option<RatFunc<F>> {
    let len = series.len();
    if len < 2 * deg + 1 {
        return None;
    }
    let s = Poly::new(series.to_vec());
    let (mut r0, mut r1) = (Poly::monomial(F::one(), len), s);
    let (mut t0, mut t1) = (Poly::<F>::zero(), Poly::<F>::one());
    while r1.degree().is_some_and(|d| d > deg) {
        let (q, r) = r0.divrem(&r1);
        let t2 = t0 - q * t1.clone();
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t2;
    }
    if t1.deg_or_zero() > deg || t1.coeff(0).is_zero() {
        return None;
    }
    let shift = -point.clone();
    Some(RatFunc::new(r1.taylor_shift(&shift), t1.taylor_shift(&shift)))
}

/// Reconstruction accepted only when a shorter prefix gives the same answer.
pub fn stable_reconstruction<F: Field>(series: &[F], point: &F, deg: usize) -> Option<RatFunc<F>> {
    let short = 2 * deg + 2;
    if series.len() < short + 2 {
        return None;
    }
    let a = rational_reconstruction(&series[..short], point, deg)?;
    let b = rational_reconstruction(series, point, deg)?;
    (a == b).then_some(a)
}
