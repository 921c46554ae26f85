use std::fmt::Write as _;

use super::{Instance, SolverError};
use crate::poset::{composition_table, enumerate_ktypes, KType, PairRelation};

/// A propositional encoding of an instance. Variable `p(i,j,r)` (1-based in
/// DIMACS) is `pair_index(i,j) * 4 + r.index() + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    n: usize,
    vars: Vec<String>,
    clauses: Vec<Vec<i32>>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl Cnf {
    pub fn var_count(&self) -> usize {
        4 * self.n * self.n.saturating_sub(1) / 2
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// The DIMACS literal of `p(i,j,r)` for `i < j`.
    pub fn literal(&self, i: usize, j: usize, r: PairRelation) -> i32 {
        assert!(i < j && j < self.n);
        (pair_index(self.n, i, j) * 4 + r.index() + 1) as i32
    }

    /// Does the assignment (indexed by variable number minus one) satisfy
    /// every clause?
    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = assignment[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    v
                } else {
                    !v
                }
            })
        })
    }

    /// Reads a model back as a type; `None` if some pair is not one-hot or
    /// the result is not a valid type.
    pub fn decode(&self, assignment: &[bool]) -> Option<KType> {
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        let mut cells = Vec::with_capacity(pairs);
        for p in 0..pairs {
            let mut hit = PairRelation::ALL
                .into_iter()
                .filter(|r| assignment.get(p * 4 + r.index()).copied().unwrap_or(false));
            let r = hit.next()?;
            if hit.next().is_some() {
                return None;
            }
            cells.push(r);
        }
        KType::from_cells(self.n, cells).ok()
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                for r in PairRelation::ALL {
                    let _ = writeln!(
                        out,
                        "c p({},{},{}) = {}  [{} {} {}]",
                        i + 1,
                        j + 1,
                        r.name(),
                        self.literal(i, j, r),
                        self.vars[i],
                        r.symbol(),
                        self.vars[j]
                    );
                }
            }
        }
        let _ = writeln!(out, "p cnf {} {}", self.var_count(), self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{l} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Encodes `inst` so that models correspond one-to-one with witnesses.
pub fn export_cnf(inst: &Instance) -> Result<Cnf, SolverError> {
    if !inst.pins().is_empty() {
        return Err(SolverError::PinnedPairs);
    }
    let n = inst.var_count();
    let mut cnf = Cnf {
        n,
        vars: inst.vars().to_vec(),
        clauses: Vec::new(),
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let lits: Vec<i32> = PairRelation::ALL.iter().map(|&r| cnf.literal(i, j, r)).collect();
            cnf.clauses.push(lits.clone());
            for a in 0..4 {
                for b in (a + 1)..4 {
                    cnf.clauses.push(vec![-lits[a], -lits[b]]);
                }
            }
        }
    }
    let comp = composition_table();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                for r1 in PairRelation::ALL {
                    for r2 in PairRelation::ALL {
                        let allowed = comp.compose(r1, r2);
                        for r3 in PairRelation::ALL {
                            if !allowed.contains(r3) {
                                cnf.clauses.push(vec![
                                    -cnf.literal(i, j, r1),
                                    -cnf.literal(j, k, r2),
                                    -cnf.literal(i, k, r3),
                                ]);
                            }
                        }
                    }
                }
            }
        }
    }
    for c in inst.constraints() {
        let table = inst.env().get(&c.relation).expect("validated constraint");
        let k = c.args.len();
        let types = enumerate_ktypes(k).expect("constraint arity within enumeration range");
        let mut seen = std::collections::BTreeSet::new();
        'types: for t in types.iter().filter(|t| !table.contains(t)) {
            let mut clause: Vec<i32> = Vec::new();
            for a in 0..k {
                for b in (a + 1)..k {
                    let (u, w) = (c.args[a], c.args[b]);
                    let r = t.rel(a, b);
                    if u == w {
                        if r != PairRelation::Eq {
                            continue 'types;
                        }
                        continue;
                    }
                    let lit = if u < w {
                        cnf.literal(u, w, r)
                    } else {
                        cnf.literal(w, u, r.dual())
                    };
                    if clause.contains(&(-lit)) {
                        continue;
                    }
                    // a pair carrying two different relations cannot occur
                    let base = (lit - 1) / 4;
                    if clause.iter().any(|&l| (-l - 1) / 4 == base && -l != lit) {
                        continue 'types;
                    }
                    clause.push(-lit);
                }
            }
            clause.sort_unstable();
            if seen.insert(clause.clone()) {
                cnf.clauses.push(clause);
            }
        }
    }
    Ok(cnf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::RelSet;

    fn one_hot_models(cnf: &Cnf, n: usize) -> Vec<KType> {
        let pairs = n * n.saturating_sub(1) / 2;
        let mut out = Vec::new();
        let total = 4usize.pow(pairs as u32);
        for code in 0..total {
            let mut a = vec![false; cnf.var_count()];
            let mut c = code;
            for p in 0..pairs {
                a[p * 4 + c % 4] = true;
                c /= 4;
            }
            if cnf.is_satisfied(&a) {
                out.push(cnf.decode(&a).unwrap());
            }
        }
        out
    }

    #[test]
    fn single_lt_has_one_model() {
        let mut inst = Instance::with_vars(2);
        inst.add_constraint("<", &[0, 1]).unwrap();
        let cnf = export_cnf(&inst).unwrap();
        let mut count = 0;
        for bits in 0u32..16 {
            let a: Vec<bool> = (0..4).map(|b| bits >> b & 1 == 1).collect();
            if cnf.is_satisfied(&a) {
                count += 1;
                assert!(a[PairRelation::Lt.index()]);
            }
        }
        assert_eq!(count, 1);
    }

    #[test]
    fn empty_two_vars_four_models() {
        let cnf = export_cnf(&Instance::with_vars(2)).unwrap();
        let mut count = 0;
        for bits in 0u32..16 {
            let a: Vec<bool> = (0..4).map(|b| bits >> b & 1 == 1).collect();
            count += cnf.is_satisfied(&a) as usize;
        }
        assert_eq!(count, 4);
    }

    #[test]
    fn cycle_is_unsatisfiable() {
        let mut inst = Instance::with_vars(3);
        inst.add_constraint("<", &[0, 1]).unwrap();
        inst.add_constraint("<", &[1, 2]).unwrap();
        inst.add_constraint("<", &[2, 0]).unwrap();
        let cnf = export_cnf(&inst).unwrap();
        assert!(one_hot_models(&cnf, 3).is_empty());
    }

    #[test]
    fn empty_three_vars_models_are_types() {
        let cnf = export_cnf(&Instance::with_vars(3)).unwrap();
        assert_eq!(one_hot_models(&cnf, 3).len(), 29);
    }

    #[test]
    fn repeated_args_and_pins() {
        let mut inst = Instance::with_vars(2);
        inst.add_constraint("Betw", &[0, 1, 0]).unwrap();
        let cnf = export_cnf(&inst).unwrap();
        assert!(one_hot_models(&cnf, 2).is_empty());

        let mut pinned = Instance::with_vars(2);
        pinned.pin(0, 1, RelSet::single(PairRelation::Lt)).unwrap();
        assert_eq!(export_cnf(&pinned), Err(SolverError::PinnedPairs));
    }

    #[test]
    fn dimacs_header() {
        let mut inst = Instance::with_vars(2);
        inst.add_constraint("<", &[0, 1]).unwrap();
        let text = export_cnf(&inst).unwrap().to_dimacs();
        assert!(text.contains("c p(1,2,LT) = 2"));
        assert!(text.lines().any(|l| l.starts_with("p cnf 4 ")));
    }
}
