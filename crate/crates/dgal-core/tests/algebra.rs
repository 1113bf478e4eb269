use dgal_core::algebra::factor::factor_rational;
use dgal_core::algebra::groebner::{groebner_basis, GbConfig};
use dgal_core::algebra::linalg::Matrix;
use dgal_core::algebra::multipoly::{MultiPoly, Ring};
use dgal_core::algebra::parse::parse_poly;
use dgal_core::algebra::poly::Poly;
use dgal_core::algebra::zerodim::solve_zero_dimensional;
use dgal_core::{CMultiPoly, Field, KPoly, KRat, Nf, NumberField, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn nf(k: i64) -> Nf {
    Nf::from_i64(k)
}

fn kpoly(c: &[i64]) -> KPoly {
    Poly::new(c.iter().map(|&x| nf(x)).collect())
}

fn small_coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..5, 1..=len)
}

/// Nonzero denominator polynomials.
fn denominator() -> impl Strategy<Value = Vec<i64>> {
    small_coeffs(3).prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
}

fn ratfunc() -> impl Strategy<Value = KRat> {
    (small_coeffs(3), denominator()).prop_map(|(n, d)| KRat::new(kpoly(&n), kpoly(&d)))
}

/// Sparse polynomials in the four entries of a 2x2 matrix.
fn multipoly() -> impl Strategy<Value = Vec<([u32; 4], i64)>> {
    prop::collection::vec(([0u32..3, 0u32..3, 0u32..2, 0u32..2], -3i64..4), 1..4)
}

fn build(ring: &std::sync::Arc<Ring>, terms: &[([u32; 4], i64)]) -> CMultiPoly {
    terms.iter().fold(MultiPoly::zero(ring), |acc, (m, c)| &acc + &MultiPoly::from_terms(ring, vec![(m.to_vec(), nf(*c))]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ratfunc_field_laws(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!((a.clone() + b.clone()) * c.clone(), a.clone() * c.clone() + b.clone() * c.clone());
        // Leibniz rule for the derivation d/dt
        prop_assert_eq!((a.clone() * b.clone()).derivative(), a.derivative() * b.clone() + a.clone() * b.derivative());
        if !b.is_zero() {
            prop_assert_eq!((a.clone() / b.clone()) * b, a);
        }
    }

    #[test]
    fn groebner_contains_generators(p in multipoly(), q in multipoly()) {
        let ring = Ring::matrix(2);
        let gens = vec![build(&ring, &p), build(&ring, &q)];
        let gb = groebner_basis(&ring, &gens, &GbConfig::default()).unwrap();
        for g in &gens {
            prop_assert!(gb.reduce(g).is_zero());
        }
        // reduced bases are canonical
        let again = groebner_basis(&ring, gb.gens(), &GbConfig::default()).unwrap();
        prop_assert_eq!(again.gens(), gb.gens());
        // a product with a generator stays in the ideal
        let multiple = &gens[0] * &MultiPoly::var_at(&ring, 2);
        prop_assert!(gb.contains(&multiple));
    }

    #[test]
    fn nullspace_is_kernel(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 1..4)) {
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| nf(x)).collect()).collect());
        let kernel = m.nullspace();
        prop_assert_eq!(kernel.len() + m.rank(), 4);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn zero_dimensional_points_satisfy_system(xs in prop::collection::btree_set(-4i64..5, 1..4), c in -3i64..4) {
        // x in the set, y = c*x + 1: one point per element
        let ring2 = Ring::matrix(2);
        let x = MultiPoly::var_at(&ring2, 0);
        let y = MultiPoly::var_at(&ring2, 1);
        let one = MultiPoly::one(&ring2);
        let fx = xs.iter().fold(one.clone(), |acc, &r| &acc * &(&x - &MultiPoly::constant(&ring2, nf(r))));
        let line = &(&y - &x.scale(&nf(c))) - &one;
        let gens = vec![fx, line, MultiPoly::var_at(&ring2, 2), MultiPoly::var_at(&ring2, 3)];
        let sol = solve_zero_dimensional(&NumberField::rationals(), &gens, &GbConfig::default()).unwrap();
        prop_assert!(sol.is_radical());
        prop_assert_eq!(sol.points.len(), xs.len());
        for p in &sol.points {
            prop_assert!(gens.iter().all(|g| g.eval(p).is_zero()));
        }
    }

    #[test]
    fn render_parse_round_trip(p in multipoly()) {
        let ring = Ring::matrix(2);
        let poly = build(&ring, &p);
        let parsed = parse_poly(&poly.render(), &ring, &NumberField::rationals()).unwrap().map(|c| c.as_constant().unwrap());
        prop_assert_eq!(parsed, poly);
    }

    #[test]
    fn factors_multiply_back(roots in prop::collection::vec(-5i64..6, 1..4), quad in 1i64..5) {
        // product of linear factors times an irreducible quadratic
        let mut f = Poly::new(vec![Rational::from_integer(quad.into()), Rational::zero(), Rational::one()]);
        for &r in &roots {
            f = f * Poly::new(vec![Rational::from_integer((-r).into()), Rational::one()]);
        }
        let factors = factor_rational(&f);
        let product = factors.iter().fold(Poly::one(), |acc, (g, e)| acc * g.pow(*e));
        prop_assert_eq!(product, f);
        prop_assert!(factors.iter().any(|(g, _)| g.degree() == Some(2)));
    }
}
