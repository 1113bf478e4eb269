use dgal_core::algebra::groebner::GbConfig;
use dgal_core::algebra::multipoly::Ring;
use dgal_core::algebra::parse::parse_poly;
use dgal_core::groups::{
    characters_generators, group_points_finite, identity_component, stabilizer_group, verify_group_axioms, AlgebraicSubgroup,
    Character, CharacterSet, Connected,
};
use dgal_core::ode::OdeSystem;
use dgal_core::relations::{relation_ideal, RelationConfig};
use dgal_core::{CMatrix, CMultiPoly, Field, Nf, NumberField, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rationals() -> NumberField {
    NumberField::rationals()
}

fn group(n: usize, gens: &[&str]) -> AlgebraicSubgroup {
    let ring = Ring::matrix(n);
    let gens: Vec<CMultiPoly> =
        gens.iter().map(|s| parse_poly(s, &ring, &rationals()).unwrap().map(|c| c.as_constant().unwrap())).collect();
    AlgebraicSubgroup::from_generators(n, &rationals(), &gens, &GbConfig::default()).unwrap()
}

fn connected(mut g: AlgebraicSubgroup) -> AlgebraicSubgroup {
    let ic = identity_component(&g, &GbConfig::default()).unwrap();
    assert!(ic.group.same_ideal(&g.extend(&ic.embedding)), "group is not connected");
    g.connected = Connected::Yes;
    g
}

fn rotation_group() -> AlgebraicSubgroup {
    group(2, &["x_1_1^2 + x_2_1^2 - 1", "x_1_2^2 + x_2_2^2 - 1", "x_1_1*x_1_2 + x_2_1*x_2_2", "x_1_1*x_2_2 - x_1_2*x_2_1 - 1"])
}

fn evaluate(ch: &Character, m: &CMatrix) -> Nf {
    let pt: Vec<Nf> = m.to_rows().into_iter().flatten().collect();
    let mut v = ch.poly.eval(&pt);
    for _ in 0..ch.det_power {
        v = v / m.det();
    }
    v
}

fn q(n: i64, d: i64) -> Nf {
    Nf::from_rational(&Rational::new(n.into(), d.into()))
}

/// Rational point `((1 - s^2)/(1 + s^2), 2s/(1 + s^2))` on the circle.
fn rotation(s: i64, d: i64) -> CMatrix {
    let (s2, d2) = (s * s, d * d);
    let (c, si) = (q(d2 - s2, d2 + s2), q(2 * s * d, d2 + s2));
    CMatrix::from_rows(vec![vec![c.clone(), si.clone()], vec![-si, c]])
}

fn check_characters(cs: &CharacterSet, points: &[CMatrix]) -> Result<(), TestCaseError> {
    let emb = &cs.embedding;
    let id = CMatrix::identity(points[0].nrows());
    for ch in &cs.all {
        prop_assert!(evaluate(ch, &id).is_one());
        for a in points {
            for b in points {
                let (a, b) = (a.map(|x| emb.apply(x)), b.map(|x| emb.apply(x)));
                prop_assert_eq!(evaluate(ch, &(&a * &b)), evaluate(ch, &a) * evaluate(ch, &b));
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn torus_characters_are_multiplicative(entries in prop::collection::vec((1i64..9, 1i64..5), 4)) {
        let torus = connected(group(2, &["x_1_2", "x_2_1"]));
        let cs = characters_generators(&torus, 1, &GbConfig::default()).unwrap();
        let pts: Vec<CMatrix> = entries.chunks(2).map(|c| CMatrix::from_rows(vec![
            vec![q(c[0].0, c[0].1), Nf::zero()], vec![Nf::zero(), q(c[1].0, c[1].1)],
        ])).collect();
        check_characters(&cs, &pts)?;
    }

    #[test]
    fn rotation_characters_are_multiplicative(s in prop::collection::vec((-5i64..6, 1i64..4), 3)) {
        let rot = connected(rotation_group());
        let cs = characters_generators(&rot, 1, &GbConfig::default()).unwrap();
        let pts: Vec<CMatrix> = s.iter().map(|&(a, b)| rotation(a, b)).collect();
        for p in &pts {
            prop_assert!(rot.contains_matrix(p));
        }
        check_characters(&cs, &pts)?;
    }
}

#[test]
fn character_ranks() {
    let cfg = GbConfig::default();
    assert_eq!(characters_generators(&AlgebraicSubgroup::general_linear(1, &rationals()), 2, &cfg).unwrap().rank, 1);
    let sl2 = characters_generators(&AlgebraicSubgroup::special_linear(2, &rationals()), 2, &cfg).unwrap();
    assert_eq!(sl2.rank, 0);
    assert!(sl2.all.iter().all(|c| c.is_trivial()));
    let torus = connected(group(2, &["x_1_2", "x_2_1"]));
    assert_eq!(characters_generators(&torus, 2, &cfg).unwrap().rank, 2);
    let rot = characters_generators(&connected(rotation_group()), 2, &cfg).unwrap();
    assert_eq!(rot.rank, 1);
    // Q(i) under any generator g^2 + k^2
    let minpoly = rot.field.minpoly().render("g");
    let k: u64 = minpoly.strip_prefix("g^2 + ").and_then(|k| k.parse().ok()).expect("quadratic imaginary minpoly");
    assert!((1..=k).any(|r| r * r == k), "{minpoly} does not define Q(i)");
}

#[test]
fn finite_points_closed() {
    for gens in [&["x_1_1^6 - 1"][..], &["x_1_2", "x_2_1", "x_1_1^2 - 1", "x_2_2^3 - 1"][..]] {
        let h = group(if gens.len() == 1 { 1 } else { 2 }, gens);
        let pts = group_points_finite(&h, &GbConfig::default()).unwrap();
        assert_eq!(pts.points.len(), 6);
        for a in &pts.points {
            assert!(pts.points.contains(&a.inverse().unwrap()));
            for b in &pts.points {
                assert!(pts.points.contains(&(a * b)));
            }
        }
    }
}

#[test]
fn generators_vanish_at_identity() {
    for h in [rotation_group(), group(2, &["x_1_2", "x_1_1 - x_2_2"]), group(1, &["x_1_1^3 - 1"])] {
        assert!(h.contains_identity());
    }
}

#[test]
fn identity_component_contains_input_ideal() {
    let h = group(2, &["x_1_2", "x_2_1", "x_1_1^2 - x_2_2^6"]);
    let ic = identity_component(&h, &GbConfig::default()).unwrap();
    assert!(ic.group.is_subgroup_of(&h.extend(&ic.embedding)));
    assert_eq!(ic.component_count, Some(2));
}

#[test]
fn stabilizers_contain_known_automorphisms() {
    let cfg = GbConfig::default();
    let sqrt = OdeSystem::from_strings(&rationals(), &[&["1/(2*t)"]]).unwrap();
    let rel = relation_ideal(&sqrt, &Nf::one(), &RelationConfig::new(2)).unwrap();
    let mut h = stabilizer_group(&rel, &cfg).unwrap();
    verify_group_axioms(&mut h, Some(&rel)).unwrap();
    assert!(h.contains_matrix(&CMatrix::from_rows(vec![vec![-Nf::one()]])));

    let osc = OdeSystem::from_strings(&rationals(), &[&["0", "1"], &["-1", "0"]]).unwrap();
    let rel = relation_ideal(&osc, &Nf::one(), &RelationConfig::new(2)).unwrap();
    let h = stabilizer_group(&rel, &cfg).unwrap();
    for (s, d) in [(1, 2), (2, 3), (-3, 1)] {
        assert!(h.contains_matrix(&rotation(s, d)));
    }
}
