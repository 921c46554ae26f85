use std::sync::Arc;

use super::ast::{Atom, PpFormula, QfFormula};
use super::env::SignatureEnv;
use super::FormulaError;
use crate::poset::{enumerate_ktypes, KType, RelSet, MAX_ENUM_ARITY};
use crate::solver::Problem;
use crate::table::RelationTable;

/// Free variables allowed in a pp-formula evaluated at the type level.
pub const PP_MAX_FREE: usize = 6;
/// Free plus bound variables allowed in a pp-formula.
pub const PP_MAX_VARS: usize = 9;

/// Truth of a quantifier-free formula on a tuple of the given type.
pub fn eval_qf(f: &QfFormula, t: &KType, env: &SignatureEnv) -> Result<bool, FormulaError> {
    if let Some(m) = f.max_var() {
        if m >= t.arity() {
            return Err(FormulaError::TypeArity {
                expected: m + 1,
                found: t.arity(),
            });
        }
    }
    eval_inner(f, t, env)
}

fn eval_inner(f: &QfFormula, t: &KType, env: &SignatureEnv) -> Result<bool, FormulaError> {
    Ok(match f {
        QfFormula::Order(a, c, b) => c.holds(t.rel(*a, *b)),
        QfFormula::Rel(name, args) => {
            let table = lookup(env, name, args.len())?;
            table.contains(&t.project(args))
        }
        QfFormula::Not(inner) => !eval_inner(inner, t, env)?,
        QfFormula::And(ps) => {
            for p in ps {
                if !eval_inner(p, t, env)? {
                    return Ok(false);
                }
            }
            true
        }
        QfFormula::Or(ps) => {
            for p in ps {
                if eval_inner(p, t, env)? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

fn lookup<'e>(env: &'e SignatureEnv, name: &str, arity: usize) -> Result<&'e Arc<RelationTable>, FormulaError> {
    let table = env
        .get_arc(name)
        .ok_or_else(|| FormulaError::UnknownRelation { name: name.to_string() })?;
    if table.arity() != arity {
        return Err(FormulaError::ArityMismatch {
            name: name.to_string(),
            expected: table.arity(),
            found: arity,
        });
    }
    Ok(table)
}

/// The relation defined by `f` over variables `0..arity`.
pub fn compile_qf(
    name: &str,
    f: &QfFormula,
    arity: usize,
    env: &SignatureEnv,
) -> Result<RelationTable, FormulaError> {
    if arity > MAX_ENUM_ARITY {
        return Err(FormulaError::ArityTooLarge {
            arity,
            max: MAX_ENUM_ARITY,
        });
    }
    let types = enumerate_ktypes(arity).map_err(|_| FormulaError::ArityTooLarge {
        arity,
        max: MAX_ENUM_ARITY,
    })?;
    let mut keep = Vec::new();
    for t in types {
        if eval_qf(f, t, env)? {
            keep.push(t.clone());
        }
    }
    Ok(RelationTable::new(name, arity, keep)?)
}

/// A pp-formula compiled into a constraint problem over free+bound
/// variables; evaluation pins the free pairs.
#[derive(Clone, Debug)]
pub struct PreparedPp {
    free: usize,
    problem: Problem,
}

impl PreparedPp {
    pub fn new(f: &PpFormula, env: &SignatureEnv) -> Result<Self, FormulaError> {
        let free = f.free().len();
        let total = f.var_count();
        if free > PP_MAX_FREE || total > PP_MAX_VARS {
            return Err(FormulaError::SizeLimit {
                free,
                total,
                max_free: PP_MAX_FREE,
                max_total: PP_MAX_VARS,
            });
        }
        let mut problem = Problem::new(total);
        for atom in f.atoms() {
            match atom {
                Atom::Order(a, c, b) => problem.restrict(*a, *b, c.relset()),
                Atom::Rel(name, args) => {
                    let table = lookup(env, name, args.len())?;
                    problem.add_table(Arc::clone(table), args);
                }
            }
        }
        Ok(PreparedPp { free, problem })
    }

    pub fn free(&self) -> usize {
        self.free
    }

    /// Does some extension of `t` to the bound variables satisfy every atom?
    pub fn eval(&self, t: &KType) -> Result<bool, FormulaError> {
        if t.arity() != self.free {
            return Err(FormulaError::TypeArity {
                expected: self.free,
                found: t.arity(),
            });
        }
        let mut p = self.problem.clone();
        for i in 0..self.free {
            for j in (i + 1)..self.free {
                p.restrict(i, j, RelSet::single(t.rel(i, j)));
            }
        }
        Ok(p.solve().is_some())
    }

    pub fn to_table(&self, name: &str) -> Result<RelationTable, FormulaError> {
        let types = enumerate_ktypes(self.free).map_err(|_| FormulaError::ArityTooLarge {
            arity: self.free,
            max: MAX_ENUM_ARITY,
        })?;
        let mut keep = Vec::new();
        for t in types {
            if self.eval(t)? {
                keep.push(t.clone());
            }
        }
        Ok(RelationTable::new(name, self.free, keep)?)
    }
}

/// Truth of a pp-formula on a tuple of type `t` over its free variables.
pub fn pp_eval(f: &PpFormula, t: &KType, env: &SignatureEnv) -> Result<bool, FormulaError> {
    PreparedPp::new(f, env)?.eval(t)
}

/// The relation defined by a pp-formula.
pub fn pp_to_table(name: &str, f: &PpFormula, env: &SignatureEnv) -> Result<RelationTable, FormulaError> {
    PreparedPp::new(f, env)?.to_table(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_pp, parse_qf};
    use crate::poset::PairRelation::*;

    fn std_env() -> &'static SignatureEnv {
        SignatureEnv::standard()
    }

    #[test]
    fn betw_on_chain_and_antichain() {
        let env = std_env();
        let betw = parse_qf("Betw(x,y,z)", &["x", "y", "z"], env).unwrap();
        assert!(eval_qf(&betw, &KType::chain(3), env).unwrap());
        let anti = KType::from_cells(3, vec![Inc, Inc, Inc]).unwrap();
        assert!(!eval_qf(&betw, &anti, env).unwrap());
        let refl = parse_qf("x = x", &["x", "y"], env).unwrap();
        for t in enumerate_ktypes(2).unwrap() {
            assert!(eval_qf(&refl, t, env).unwrap());
        }
    }

    #[test]
    fn compile_simple_tables() {
        let env = std_env();
        let lt = parse_qf("x < y", &["x", "y"], env).unwrap();
        let t = compile_qf("lt", &lt, 2, env).unwrap();
        assert_eq!(t.as_relset(), Some(RelSet::single(Lt)));
        let ne = parse_qf("x != y", &["x", "y"], env).unwrap();
        assert_eq!(compile_qf("ne", &ne, 2, env).unwrap().len(), 3);
        assert!(matches!(
            compile_qf("big", &lt, 7, env),
            Err(FormulaError::ArityTooLarge { arity: 7, .. })
        ));
    }

    #[test]
    fn betw_and_cycl_table_sizes() {
        let env = std_env();
        let betw = env.get("Betw").unwrap();
        assert_eq!(betw.len(), 2);
        assert!(betw.contains(&KType::chain(3)));
        assert!(betw.contains(&KType::chain(3).reversed()));
        assert_eq!(env.get("Cycl").unwrap().len(), 6);
    }

    #[test]
    fn lowbot_observation() {
        let env = std_env();
        let f = parse_pp("exists z . z < y & z # x", &["x", "y"], env).unwrap();
        assert!(pp_eval(&f, &KType::pair(Lt), env).unwrap());
        assert!(!pp_eval(&f, &KType::pair(Gt), env).unwrap());
        assert!(!pp_eval(&f, &KType::pair(Eq), env).unwrap());
        assert!(pp_eval(&f, &KType::pair(Inc), env).unwrap());
        let table = pp_to_table("lowbot", &f, env).unwrap();
        assert_eq!(table.as_relset(), Some(RelSet::of(&[Lt, Inc])));
    }

    #[test]
    fn single_atom_reproduces_table() {
        let env = std_env();
        let f = parse_pp("Low(x,y,z)", &["x", "y", "z"], env).unwrap();
        let t = pp_to_table("Low", &f, env).unwrap();
        assert_eq!(t.types(), env.get("Low").unwrap().types());
    }

    #[test]
    fn size_limits() {
        let env = std_env();
        let f = parse_pp(
            "exists a b c d e f g h . a < b",
            &["x", "y"],
            env,
        )
        .unwrap();
        assert!(matches!(
            pp_eval(&f, &KType::pair(Lt), env),
            Err(FormulaError::SizeLimit { total: 10, .. })
        ));
        let g = parse_pp("x < y", &["x", "y"], env).unwrap();
        assert!(matches!(
            pp_eval(&g, &KType::chain(3), env),
            Err(FormulaError::TypeArity { expected: 2, found: 3 })
        ));
    }
}
