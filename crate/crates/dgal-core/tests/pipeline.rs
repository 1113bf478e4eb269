mod oracle;

use dgal_core::algebra::groebner::GbConfig;
use dgal_core::algebra::multipoly::Ring;
use dgal_core::algebra::parse::parse_poly;
use dgal_core::groups::AlgebraicSubgroup;
use dgal_core::ode::OdeSystem;
use dgal_core::pipeline::{galois_group, GaloisGroupDescription, PipelineConfig};
use dgal_core::{CMultiPoly, DgalError, NumberField};
use oracle::{qf, Q};
use proptest::prelude::*;

fn system(rows: &[&[&str]]) -> OdeSystem {
    OdeSystem::from_strings(&NumberField::rationals(), rows).unwrap()
}

fn run(rows: &[&[&str]], cfg: PipelineConfig) -> GaloisGroupDescription {
    let g = galois_group(&system(rows), &cfg).unwrap();
    assert!(g.sandwich.lower_in_identity_component && g.sandwich.identity_component_in_proto, "{}", g.to_json());
    g
}

fn group(n: usize, field: &NumberField, gens: &[&str]) -> AlgebraicSubgroup {
    let ring = Ring::matrix(n);
    let gens: Vec<CMultiPoly> =
        gens.iter().map(|s| parse_poly(s, &ring, field).unwrap().map(|c| c.as_constant().unwrap())).collect();
    AlgebraicSubgroup::from_generators(n, field, &gens, &GbConfig::default()).unwrap()
}

#[test]
fn square_root_is_order_two() {
    let g = run(&[&["1/(2*t)"]], PipelineConfig::with_degree(2));
    assert_eq!(g.relations, vec!["x_1_1^2 - t"]);
    assert_eq!(g.order, Some(2));
    assert_eq!(g.identity_component.generators, vec!["x_1_1 - 1"]);
    let pts = g.galois_points.unwrap();
    oracle::matches_exponent_lattice(&pts.points, &[qf(1, 2)]).unwrap();
}

#[test]
fn exponential_is_the_multiplicative_group() {
    for d in 1..=3 {
        let g = run(&[&["1"]], PipelineConfig::with_degree(d));
        assert!(g.relations.is_empty());
        assert_eq!(g.dimension, 1);
        assert!(g.identity_component.generators.is_empty());
    }
}

#[test]
fn rational_solution_gives_trivial_group() {
    let g = run(&[&["1/t"]], PipelineConfig::with_degree(2));
    // the degree <= 2 part of the ideal generated by x - t
    assert_eq!(g.relations, vec!["x_1_1^2 - t^2", "x_1_1 - t"]);
    assert_eq!(g.order, Some(1));
}

#[test]
fn harmonic_oscillator_is_the_rotation_group() {
    let g = run(&[&["0", "1"], &["-1", "0"]], PipelineConfig::with_degree(2));
    assert_eq!(g.dimension, 1);
    assert_eq!(g.characters.len(), 1);
    let ours = g.galois_identity.unwrap();
    let rotations = group(
        2,
        &ours.field,
        &["x_1_1^2 + x_2_1^2 - 1", "x_1_2^2 + x_2_2^2 - 1", "x_1_1*x_1_2 + x_2_1*x_2_2", "x_1_1*x_2_2 - x_1_2*x_2_1 - 1"],
    );
    assert!(ours.same_ideal(&rotations));
}

#[test]
fn airy_short_circuits_to_special_linear() {
    let g = run(&[&["0", "1"], &["t", "0"]], PipelineConfig::with_degree(2));
    assert!(g.short_circuit);
    assert_eq!(g.relations, vec!["x_1_2*x_2_1 - x_1_1*x_2_2 + 1"]);
    let sl2 = AlgebraicSubgroup::special_linear(2, &NumberField::rationals());
    assert!(g.galois_identity.unwrap().same_ideal(&sl2));
}

#[test]
fn refuses_full_degree_bound() {
    let err = galois_group(&system(&[&["1"]]), &PipelineConfig::full_bound()).unwrap_err();
    assert!(matches!(err, DgalError::BoundNotExecutable { .. }), "{err}");
}

fn exponent() -> impl Strategy<Value = Q> {
    prop::sample::select(vec![qf(1, 2), qf(-1, 2), qf(1, 3), qf(2, 3), qf(-1, 3), qf(1, 1)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// `diag(r_1/t, r_2/t)` has the cyclic group predicted by the exponents.
    #[test]
    fn diagonal_kummer_matches_exponent_lattice(r1 in exponent(), r2 in exponent()) {
        let rows = [format!("{}/t", r1), "0".into(), "0".into(), format!("{}/t", r2)];
        let rows: Vec<&str> = rows.iter().map(String::as_str).collect();
        let cfg = PipelineConfig { coeff_degree: 2, ..PipelineConfig::with_degree(3) };
        let g = run(&[&rows[..2], &rows[2..]], cfg);
        let pts = g.galois_points.expect("finite group");
        if let Err(e) = oracle::matches_exponent_lattice(&pts.points, &[r1, r2]) {
            return Err(TestCaseError::fail(e));
        }
    }
}
