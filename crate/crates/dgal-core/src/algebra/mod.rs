//! Exact arithmetic: fields, polynomials, linear algebra, ideals, lattices.

pub mod ext;
pub mod factor;
pub mod field;
pub mod groebner;
pub mod lattice;
pub mod linalg;
pub mod multipoly;
pub mod numfield;
pub mod pade;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod zerodim;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("polynomial `{0}` is not monic")]
    NotMonic(String),
    #[error("polynomial `{poly}` is reducible; factor `{factor}`")]
    Reducible { poly: String, factor: String },
    #[error("ideal is positive dimensional; free variables {free_vars:?}")]
    PositiveDimensional { free_vars: Vec<String> },
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
