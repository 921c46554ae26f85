//! Finite posets, quantifier-free types of tuples over the random poset and
//! the canonical behaviours acting on them.

mod behaviour;
mod composition;
mod enumerate;
mod ktype;
mod relation;
mod unary;

pub use behaviour::{binary_image, BinaryBehaviour};
pub use composition::{composition_table, CompositionTable};
pub use enumerate::{enumerate_ktypes, MAX_ENUM_ARITY};
pub use ktype::{FinitePoset, KType};
pub use relation::{PairRelation, RelSet};
pub use unary::{rotate_at, unary_images, UnaryFamily};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("table is not square: row {row} does not have {expected} entries")]
    NotSquare { row: usize, expected: usize },
    #[error("not reflexive: {i} is not below itself")]
    Reflexivity { i: usize },
    #[error("not antisymmetric: {i} <= {j} and {j} <= {i}")]
    Antisymmetry { i: usize, j: usize },
    #[error("not transitive: {i} <= {j} <= {k} but not {i} <= {k}")]
    Transitivity { i: usize, j: usize, k: usize },
    #[error("element {index} out of range for a poset of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("type arity must be at least 1")]
    ArityZero,
    #[error("arity {arity} exceeds the enumeration ceiling {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("arity {arity} needs {} cells, found {found}", arity * arity.saturating_sub(1) / 2)]
    CellCount { arity: usize, found: usize },
    #[error("equality is not a congruence: {i} = {j} but they differ towards {l}")]
    NotCongruent { i: usize, j: usize, l: usize },
    #[error("strict order is not transitive: {i} < {j} < {l} but not {i} < {l}")]
    NotTransitive { i: usize, j: usize, l: usize },
    #[error("behaviour {behaviour} maps ({left}, {right}) to = off the diagonal, or the diagonal elsewhere")]
    NotInjective {
        behaviour: String,
        left: PairRelation,
        right: PairRelation,
    },
    #[error("types of arity {left} and {right} cannot be combined")]
    ArityMismatch { left: usize, right: usize },
    #[error("behaviour {behaviour} produced an invalid type: {source}")]
    InvalidImage {
        behaviour: String,
        source: Box<PosetError>,
    },
}
