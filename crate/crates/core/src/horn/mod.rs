//! The Horn fragments: exact Horn definitions of relations closed under
//! `e_≤` or `e_<`, and a polynomial solver for instances over them.

mod solve;
mod theory;

pub use solve::{horn_scaling_instance, horn_solve, SCALING_RELATIONS};
pub use theory::{
    close_under, closure_violation, horn_synthesize, Dialect, HornAtom, HornClause, HornTheory,
    HORN_MAX_ARITY,
};

use thiserror::Error;

use crate::poset::KType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HornError {
    #[error("relation {name} has no Horn definition in the {dialect} dialect{}", fmt_violation(.violation))]
    NotHornExpressible {
        name: String,
        dialect: Dialect,
        /// Members `s`, `t` whose image leaves the relation.
        violation: Option<Box<(KType, KType, KType)>>,
    },
    #[error("clauses do not define relation {name} exactly")]
    NotExact { name: String },
    #[error("Horn synthesis supports arity at most {max}, got {arity}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("theory for {name} is in the {found} dialect, expected {expected}")]
    DialectMismatch {
        expected: Dialect,
        found: Dialect,
        name: String,
    },
    #[error("no Horn theory for relation '{0}'")]
    MissingTheory(String),
    #[error("Horn solving does not support pinned pairs")]
    PinnedPairs,
    #[error("unknown dialect '{0}' (expected leq or strict)")]
    UnknownDialect(String),
}

fn fmt_violation(v: &Option<Box<(KType, KType, KType)>>) -> String {
    match v.as_deref() {
        Some((s, t, img)) => format!(" (image of [{s}] and [{t}] is [{img}], outside the relation)"),
        None => String::new(),
    }
}
