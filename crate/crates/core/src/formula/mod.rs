//! Quantifier-free and primitive positive formulas over the random poset,
//! their parser, and their exact semantics on types.

mod ast;
mod env;
mod parser;
mod semantics;

pub use ast::{Atom, Cmp, Formula, PpFormula, QfFormula};
pub use env::{builtin, SignatureEnv, BUILTIN_DEFINITIONS, ORDER_RELATIONS};
pub use parser::{parse_formula, parse_pp, parse_qf};
pub use semantics::{compile_qf, eval_qf, pp_eval, pp_to_table, PreparedPp, PP_MAX_FREE, PP_MAX_VARS};

use thiserror::Error;

use crate::table::TableError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unknown relation '{name}'")]
    UnknownRelation { name: String },
    #[error("relation '{name}' has arity {expected}, used with {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("undeclared variable '{name}'")]
    UndeclaredVariable { name: String },
    #[error("relation '{name}' is already defined")]
    DuplicateRelation { name: String },
    #[error("negation and disjunction are not allowed in a primitive positive formula")]
    NotPrimitivePositive,
    #[error("arity {arity} exceeds the limit {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("pp-formula with {free} free and {total} total variables exceeds the limits ({max_free} free, {max_total} total)")]
    SizeLimit {
        free: usize,
        total: usize,
        max_free: usize,
        max_total: usize,
    },
    #[error("formula needs a type of arity {expected}, got {found}")]
    TypeArity { expected: usize, found: usize },
    #[error(transparent)]
    Table(#[from] TableError),
}
