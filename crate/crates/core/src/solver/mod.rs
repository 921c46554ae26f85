//! Complete decision procedure for Poset-SAT: backtracking over pair
//! relations with point-algebra propagation, a brute-force oracle, CNF export,
//! a seeded instance generator and the line-based instance format.

mod cnf;
mod format;
mod generate;
mod instance;
mod network;

pub use cnf::{export_cnf, Cnf};
pub use format::{parse_instance, parse_instance_with, write_instance, InstanceFile};
pub use generate::{random_instance, Profile};
pub use instance::{Constraint, Instance, SolveResult, Witness};
pub use network::{Problem, SearchStats};

use std::sync::Arc;

use thiserror::Error;

use crate::formula::FormulaError;
use crate::poset::{enumerate_ktypes, KType, MAX_ENUM_ARITY};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("unknown relation '{0}'")]
    UnknownRelation(String),
    #[error("relation '{name}' has arity {expected}, used with {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("variable index {index} out of range ({count} variables)")]
    VariableOutOfRange { index: usize, count: usize },
    #[error("relation '{0}' is empty")]
    EmptyRelation(String),
    #[error("pin on ({0}, {1}) allows no relation")]
    EmptyPin(usize, usize),
    #[error("cannot pin variable {0} against itself")]
    SelfPin(usize),
    #[error("brute force supports at most {max} variables, instance has {found}")]
    SizeLimit { found: usize, max: usize },
    #[error("CNF export does not support pinned pairs")]
    PinnedPairs,
    #[error("bad profile: {0}")]
    BadProfile(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula {
        line: usize,
        #[source]
        source: FormulaError,
    },
}

/// The constraint network of `inst`.
pub fn problem_of(inst: &Instance) -> Problem {
    let mut p = Problem::new(inst.var_count());
    for c in inst.constraints() {
        let table = inst
            .env()
            .get_arc(&c.relation)
            .expect("instance constraints name relations of its environment");
        p.add_table(Arc::clone(table), &c.args);
    }
    for (&(i, j), &s) in inst.pins() {
        p.restrict(i, j, s);
    }
    p
}

fn wrap(inst: &Instance, t: Option<KType>) -> SolveResult {
    match t {
        Some(ktype) => SolveResult::Sat(Witness {
            vars: inst.vars().to_vec(),
            ktype,
        }),
        None => SolveResult::Unsat,
    }
}

/// Decides `inst` by backtracking search.
pub fn solve(inst: &Instance) -> SolveResult {
    wrap(inst, problem_of(inst).solve())
}

/// Like [`solve`], also returning search statistics.
pub fn solve_with_stats(inst: &Instance) -> (SolveResult, SearchStats) {
    let (t, stats) = problem_of(inst).solve_with_stats();
    (wrap(inst, t), stats)
}

/// Decides `inst` by trying every type over its variables in order.
pub fn brute_force(inst: &Instance) -> Result<SolveResult, SolverError> {
    let n = inst.var_count();
    if n > MAX_ENUM_ARITY {
        return Err(SolverError::SizeLimit {
            found: n,
            max: MAX_ENUM_ARITY,
        });
    }
    if n == 0 {
        let t = KType::diagonal(0);
        return Ok(wrap(inst, inst.satisfied_by(&t).then_some(t)));
    }
    let types = enumerate_ktypes(n).expect("arity checked above");
    Ok(wrap(inst, types.iter().find(|t| inst.satisfied_by(t)).cloned()))
}
