use super::ClassifyError;
use crate::formula::{Atom, PpFormula, PreparedPp, SignatureEnv, PP_MAX_FREE, PP_MAX_VARS};
use crate::poset::{enumerate_ktypes, KType};
use crate::table::RelationTable;

/// Limits for [`pp_search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PpBudget {
    pub max_bound: usize,
    pub max_atoms: usize,
    /// Conjunctions examined before giving up.
    pub max_nodes: u64,
}

impl Default for PpBudget {
    fn default() -> Self {
        PpBudget {
            max_bound: 2,
            max_atoms: 6,
            max_nodes: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PpSearchOutcome {
    Found(PpFormula),
    NotFound {
        nodes: u64,
        /// Whether the whole budgeted space was covered.
        exhausted: bool,
    },
}

impl PpSearchOutcome {
    pub fn formula(&self) -> Option<&PpFormula> {
        match self {
            PpSearchOutcome::Found(f) => Some(f),
            PpSearchOutcome::NotFound { .. } => None,
        }
    }
}

/// Largest target arity accepted by [`pp_search`].
pub const PP_SEARCH_MAX_ARITY: usize = 4;

struct Search<'a> {
    env: &'a SignatureEnv,
    free: Vec<String>,
    bound: Vec<String>,
    atoms: Vec<Atom>,
    target: Vec<&'a KType>,
    others: Vec<&'a KType>,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    fn formula(&self, chosen: &[usize]) -> PpFormula {
        PpFormula::new(
            self.free.clone(),
            self.bound.clone(),
            chosen.iter().map(|&i| self.atoms[i].clone()).collect(),
        )
    }

    fn covers_target(&self, p: &PreparedPp) -> Result<bool, ClassifyError> {
        for t in &self.target {
            if !p.eval(t)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn excludes_others(&self, p: &PreparedPp) -> Result<bool, ClassifyError> {
        for t in &self.others {
            if p.eval(t)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn uses_all_bound(&self, chosen: &[usize]) -> bool {
        let k = self.free.len();
        (k..k + self.bound.len()).all(|v| chosen.iter().any(|&i| self.atoms[i].vars().contains(&v)))
    }

    /// Depth-first over increasing atom indices; `None` when the node cap hits.
    fn dfs(&mut self, chosen: &mut Vec<usize>, size: usize) -> Result<Option<Option<PpFormula>>, ClassifyError> {
        let start = chosen.last().map_or(0, |&i| i + 1);
        for i in start..self.atoms.len() {
            if self.atoms.len() - i < size - chosen.len() {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Ok(None);
            }
            chosen.push(i);
            let f = self.formula(chosen);
            let p = PreparedPp::new(&f, self.env)?;
            if self.covers_target(&p)? {
                if chosen.len() == size {
                    if self.uses_all_bound(chosen) && self.excludes_others(&p)? {
                        return Ok(Some(Some(f)));
                    }
                } else {
                    match self.dfs(chosen, size)? {
                        Some(None) => {}
                        other => return Ok(other),
                    }
                }
            }
            chosen.pop();
        }
        Ok(Some(None))
    }
}

fn tuples(vars: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..vars).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Looks for a pp-formula over `env` defining `target` exactly, by iterative
/// deepening on bound variables and then on the number of conjuncts.
pub fn pp_search(
    target: &RelationTable,
    env: &SignatureEnv,
    budget: &PpBudget,
) -> Result<PpSearchOutcome, ClassifyError> {
    let k = target.arity();
    if k > PP_SEARCH_MAX_ARITY {
        return Err(ClassifyError::ArityTooLarge {
            name: target.name().to_string(),
            arity: k,
            max: PP_SEARCH_MAX_ARITY,
        });
    }
    if k > PP_MAX_FREE || k + budget.max_bound > PP_MAX_VARS {
        return Err(ClassifyError::SizeLimit {
            free: k,
            total: k + budget.max_bound,
            max_total: PP_MAX_VARS,
        });
    }
    if k == 0 {
        return Ok(PpSearchOutcome::NotFound {
            nodes: 0,
            exhausted: true,
        });
    }
    let all = enumerate_ktypes(k).expect("arity checked");
    let target_types: Vec<&KType> = target.iter().collect();
    let others: Vec<&KType> = all.iter().filter(|t| !target.contains(t)).collect();
    let free: Vec<String> = (1..=k).map(|i| format!("v{i}")).collect();
    let mut nodes = 0;
    for b in 0..=budget.max_bound {
        let vars = k + b;
        let bound: Vec<String> = (1..=b).map(|i| format!("u{i}")).collect();
        let mut atoms = Vec::new();
        for name in env.names() {
            let arity = env.get(name).expect("listed name").arity();
            for args in tuples(vars, arity) {
                atoms.push(Atom::Rel(name.to_string(), args));
            }
        }
        let mut s = Search {
            env,
            free: free.clone(),
            bound,
            atoms,
            target: target_types.clone(),
            others: others.clone(),
            nodes,
            max_nodes: budget.max_nodes,
        };
        for size in 1..=budget.max_atoms {
            match s.dfs(&mut Vec::new(), size)? {
                None => {
                    return Ok(PpSearchOutcome::NotFound {
                        nodes: s.nodes.min(budget.max_nodes),
                        exhausted: false,
                    })
                }
                Some(Some(f)) => return Ok(PpSearchOutcome::Found(f)),
                Some(None) => {}
            }
        }
        nodes = s.nodes;
    }
    Ok(PpSearchOutcome::NotFound { nodes, exhausted: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{builtin, pp_to_table};
    use crate::poset::{PairRelation::*, RelSet};

    #[test]
    fn lowbot_is_found() {
        let env = SignatureEnv::standard().restricted(&["<", "#"]).unwrap();
        let target = RelationTable::binary("lowbot", RelSet::of(&[Lt, Inc]));
        let budget = PpBudget {
            max_bound: 1,
            max_atoms: 2,
            ..PpBudget::default()
        };
        let f = pp_search(&target, &env, &budget).unwrap();
        let f = f.formula().expect("definition exists");
        assert_eq!(f.bound().len(), 1);
        assert_eq!(f.atoms().len(), 2);
        assert_eq!(pp_to_table("check", f, &env).unwrap().types(), target.types());
    }

    #[test]
    fn identity_for_low() {
        let env = SignatureEnv::standard().restricted(&["Low"]).unwrap();
        let low = builtin("Low").unwrap();
        let f = pp_search(low, &env, &PpBudget::default()).unwrap();
        assert_eq!(f.formula().unwrap().to_string(), "Low(v1,v2,v3)");
    }

    #[test]
    fn inc_from_lt_is_not_found() {
        let env = SignatureEnv::standard().restricted(&["<"]).unwrap();
        let target = RelationTable::binary("inc", RelSet::single(Inc));
        let budget = PpBudget {
            max_bound: 1,
            max_atoms: 2,
            ..PpBudget::default()
        };
        assert!(matches!(
            pp_search(&target, &env, &budget).unwrap(),
            PpSearchOutcome::NotFound { exhausted: true, .. }
        ));
    }

    #[test]
    fn limits() {
        let env = SignatureEnv::standard().restricted(&["<"]).unwrap();
        let big = RelationTable::full("big", 5).unwrap();
        assert!(matches!(
            pp_search(&big, &env, &PpBudget::default()),
            Err(ClassifyError::ArityTooLarge { .. })
        ));
        let budget = PpBudget {
            max_bound: 7,
            ..PpBudget::default()
        };
        assert!(matches!(
            pp_search(builtin("Low").unwrap(), &env, &budget),
            Err(ClassifyError::SizeLimit { .. })
        ));
    }
}
