use std::collections::BTreeMap;
use std::fmt;

use super::SolverError;
use crate::formula::SignatureEnv;
use crate::poset::{KType, PairRelation, RelSet};

/// One constraint application `relation(args)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub relation: String,
    pub args: Vec<usize>,
}

/// A Poset-SAT instance: variables, constraint applications over a
/// signature, and optional pinned pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    vars: Vec<String>,
    constraints: Vec<Constraint>,
    env: SignatureEnv,
    pins: BTreeMap<(usize, usize), RelSet>,
}

impl Instance {
    pub fn new(env: SignatureEnv) -> Self {
        Instance {
            vars: Vec::new(),
            constraints: Vec::new(),
            env,
            pins: BTreeMap::new(),
        }
    }

    /// An instance over the standard environment with `n` variables `x1..xn`.
    pub fn with_vars(n: usize) -> Self {
        let mut inst = Instance::new(SignatureEnv::standard().clone());
        for i in 0..n {
            inst.add_var(format!("x{}", i + 1));
        }
        inst
    }

    pub fn add_var(&mut self, name: impl Into<String>) -> usize {
        self.vars.push(name.into());
        self.vars.len() - 1
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn add_constraint(&mut self, relation: &str, args: &[usize]) -> Result<(), SolverError> {
        let table = self
            .env
            .get(relation)
            .ok_or_else(|| SolverError::UnknownRelation(relation.to_string()))?;
        if table.arity() != args.len() {
            return Err(SolverError::ArityMismatch {
                name: relation.to_string(),
                expected: table.arity(),
                found: args.len(),
            });
        }
        if let Some(&v) = args.iter().find(|&&v| v >= self.vars.len()) {
            return Err(SolverError::VariableOutOfRange {
                index: v,
                count: self.vars.len(),
            });
        }
        if table.is_empty() {
            return Err(SolverError::EmptyRelation(relation.to_string()));
        }
        self.constraints.push(Constraint {
            relation: relation.to_string(),
            args: args.to_vec(),
        });
        Ok(())
    }

    /// Restricts the pair `(i, j)` to `allowed` (read as the relation of `i`
    /// to `j`). Repeated pins on a pair intersect.
    pub fn pin(&mut self, i: usize, j: usize, allowed: RelSet) -> Result<(), SolverError> {
        let n = self.vars.len();
        for v in [i, j] {
            if v >= n {
                return Err(SolverError::VariableOutOfRange { index: v, count: n });
            }
        }
        if i == j {
            return Err(SolverError::SelfPin(i));
        }
        if allowed.is_empty() {
            return Err(SolverError::EmptyPin(i, j));
        }
        let (key, s) = if i < j { ((i, j), allowed) } else { ((j, i), allowed.dual()) };
        let entry = self.pins.entry(key).or_insert(RelSet::FULL);
        *entry = entry.intersection(s);
        Ok(())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn env(&self) -> &SignatureEnv {
        &self.env
    }

    pub fn pins(&self) -> &BTreeMap<(usize, usize), RelSet> {
        &self.pins
    }

    /// Does `t` satisfy every constraint and pin?
    pub fn satisfied_by(&self, t: &KType) -> bool {
        if t.arity() != self.vars.len() {
            return false;
        }
        let pins_ok = self.pins.iter().all(|(&(i, j), s)| s.contains(t.rel(i, j)));
        pins_ok
            && self.constraints.iter().all(|c| {
                self.env
                    .get(&c.relation)
                    .is_some_and(|table| table.contains(&t.project(&c.args)))
            })
    }
}

/// A satisfying type over the instance variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub vars: Vec<String>,
    pub ktype: KType,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.ktype;
        let reps = t.class_representatives();
        for (v, &rep) in reps.iter().enumerate() {
            if rep != v {
                writeln!(f, "{} = {}", self.vars[rep], self.vars[v])?;
            }
        }
        let heads: Vec<usize> = (0..reps.len()).filter(|&v| reps[v] == v).collect();
        for (a, &i) in heads.iter().enumerate() {
            for &j in &heads[a + 1..] {
                let sym = match t.rel(i, j) {
                    PairRelation::Lt => "<",
                    PairRelation::Gt => ">",
                    PairRelation::Inc => "#",
                    PairRelation::Eq => unreachable!("representatives are distinct classes"),
                };
                writeln!(f, "{} {} {}", self.vars[i], sym, self.vars[j])?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Sat(Witness),
    Unsat,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SolveResult::Sat(w) => Some(w),
            SolveResult::Unsat => None,
        }
    }
}
