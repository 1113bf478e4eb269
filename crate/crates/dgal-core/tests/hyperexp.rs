mod oracle;

use dgal_core::algebra::lattice;
use dgal_core::algebra::parse::parse_ratfunc;
use dgal_core::hyperexp::{constant_relations, relation_lattice, HyperexpElement};
use dgal_core::{Field, KRat, NumberField};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use oracle::{q, qf, Q};
use proptest::prelude::*;

fn element(s: &str) -> HyperexpElement {
    let k = NumberField::rationals();
    HyperexpElement::new(&k, parse_ratfunc(s, &k).unwrap())
}

fn residue() -> impl Strategy<Value = Q> {
    prop::sample::select(vec![q(0), q(1), q(-1), qf(1, 2), qf(-1, 2), qf(1, 3), qf(2, 3), q(2)])
}

/// `c + r0/t + r1/(t - 1)`.
#[derive(Clone, Debug)]
struct Simple {
    c: i64,
    r: [Q; 2],
}

impl Simple {
    fn text(&self) -> String {
        let f = |x: &Q| format!("({}/{})", x.numer(), x.denom());
        format!("{} + {}/t + {}/(t - 1)", self.c, f(&self.r[0]), f(&self.r[1]))
    }

    /// Admissible iff the constant parts cancel and the residues are integers.
    fn admissible(vs: &[Simple], m: &[i64]) -> bool {
        let c: i64 = vs.iter().zip(m).map(|(v, k)| v.c * k).sum();
        c == 0 && (0..2).all(|p| vs.iter().zip(m).fold(Q::zero(), |acc, (v, k)| acc + &v.r[p] * q(*k)).is_integer())
    }
}

fn simple() -> impl Strategy<Value = Simple> {
    (prop::sample::select(vec![0i64, 0, 1, -1]), residue(), residue()).prop_map(|(c, a, b)| Simple { c, r: [a, b] })
}

fn vectors(l: usize, span: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..l {
        out = out.into_iter().flat_map(|v| (-span..=span).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lattice_matches_brute_force(vs in prop::collection::vec(simple(), 1..=3)) {
        let hs: Vec<HyperexpElement> = vs.iter().map(|v| element(&v.text())).collect();
        let rl = relation_lattice(&NumberField::rationals(), &hs).unwrap();
        for m in vectors(vs.len(), 6) {
            let big: Vec<BigInt> = m.iter().map(|&x| BigInt::from(x)).collect();
            prop_assert_eq!(lattice::contains(&rl.admissible, &big), Simple::admissible(&vs, &m), "m = {:?}", m);
        }
        prop_assert_eq!(rl.relations.len() + rl.eta.len(), vs.len());
    }

    #[test]
    fn relations_satisfy_log_derivative_identity(vs in prop::collection::vec(simple(), 1..=3)) {
        let hs: Vec<HyperexpElement> = vs.iter().map(|v| element(&v.text())).collect();
        let rl = relation_lattice(&NumberField::rationals(), &hs).unwrap();
        for r in &rl.relations {
            prop_assert!(!r.exponent.is_zero());
            let mut comb = hs[r.index].v.clone() * KRat::from_rational(&Q::from_integer(r.exponent.clone()));
            for (i, e) in &r.eta_exponents {
                comb = comb - hs[rl.eta[*i]].v.clone() * KRat::from_rational(&Q::from_integer(e.clone()));
            }
            let f = &r.cofactor;
            prop_assert_eq!(f.derivative(), comb * f.clone());
        }
        // η carries no admissible vector
        for m in vectors(rl.eta.len(), 4).into_iter().filter(|m| m.iter().any(|&x| x != 0)) {
            let mut full = vec![0i64; vs.len()];
            for (k, &j) in rl.eta.iter().enumerate() {
                full[j] = m[k];
            }
            prop_assert!(!Simple::admissible(&vs, &full));
        }
    }

    #[test]
    fn partial_fractions_recombine(vs in prop::collection::vec(simple(), 1..=2)) {
        for v in &vs {
            let h = element(&v.text());
            prop_assert_eq!(h.recombine(), h.v.clone());
        }
    }
}

#[test]
fn half_exponent_gives_square_relation() {
    let hs = [element("1/t"), element("1/(2*t)")];
    let cr = constant_relations(&NumberField::rationals(), &hs);
    assert_eq!(cr.relations.len(), 1);
    let r = &cr.relations[0];
    assert!(r.cofactor.is_one());
    assert_eq!((r.index, r.exponent.clone()), (0, BigInt::from(1)));
    assert_eq!(r.eta_exponents, vec![(0, BigInt::from(2))]);
    let rl = relation_lattice(&NumberField::rationals(), &hs).unwrap();
    assert!(rl.cofactor(&[BigInt::from(-1), BigInt::from(2)]).unwrap().is_one());
}

#[test]
fn exponential_is_free() {
    let rl = relation_lattice(&NumberField::rationals(), &[element("1")]).unwrap();
    assert!(rl.relations.is_empty());
    assert_eq!(rl.eta, vec![0]);
}
