//! Complexity classification of constraint languages: preservation checks
//! against the behaviour catalog, bounded pp-definability search, and the
//! decision procedure producing a labelled verdict.

mod classify;
mod preserve;
mod search;

pub use classify::{
    classify, table_formula, Certainty, Certificate, ClassifyConfig, Label, TraceLine, Verdict,
    CLASSIFY_MAX_ARITY,
};
pub use preserve::{preserved_binary, preserved_unary, CounterExample, Preservation};
pub use search::{pp_search, PpBudget, PpSearchOutcome, PP_SEARCH_MAX_ARITY};

pub use crate::table::RelationTable;

use thiserror::Error;

use crate::formula::FormulaError;
use crate::horn::HornError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("relation {name} has arity {arity}, above the limit {max}")]
    ArityTooLarge { name: String, arity: usize, max: usize },
    #[error("search with {free} free and {total} total variables exceeds the limit {max_total}")]
    SizeLimit { free: usize, total: usize, max_total: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Horn(#[from] HornError),
}
