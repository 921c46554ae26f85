use std::fmt;
use std::str::FromStr;

use super::HornError;
use crate::formula::{Cmp, QfFormula};
use crate::poset::{binary_image, enumerate_ktypes, BinaryBehaviour, KType, PairRelation};
use crate::table::RelationTable;

/// Horn syntax over `≤` atoms, or over `<` and `=` atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dialect {
    Leq,
    Strict,
}

impl Dialect {
    pub fn name(self) -> &'static str {
        match self {
            Dialect::Leq => "leq",
            Dialect::Strict => "strict",
        }
    }

    /// The embedding whose closure characterises definability in this dialect.
    pub fn behaviour(self) -> BinaryBehaviour {
        match self {
            Dialect::Leq => BinaryBehaviour::e_leq(),
            Dialect::Strict => BinaryBehaviour::e_lt(),
        }
    }

    /// All atoms over `arity` variables, in a fixed order.
    pub fn atoms(self, arity: usize) -> Vec<HornAtom> {
        let mut out = Vec::new();
        for i in 0..arity {
            for j in 0..arity {
                if i == j {
                    continue;
                }
                out.push(match self {
                    Dialect::Leq => HornAtom::Leq(i, j),
                    Dialect::Strict => HornAtom::Lt(i, j),
                });
            }
        }
        if self == Dialect::Strict {
            for i in 0..arity {
                for j in (i + 1)..arity {
                    out.push(HornAtom::Eq(i, j));
                }
            }
        }
        out
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dialect {
    type Err = HornError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "leq" => Ok(Dialect::Leq),
            "strict" => Ok(Dialect::Strict),
            other => Err(HornError::UnknownDialect(other.to_string())),
        }
    }
}

/// `i ≤ j`, `i < j` or `i = j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HornAtom {
    Leq(usize, usize),
    Lt(usize, usize),
    Eq(usize, usize),
}

impl HornAtom {
    pub fn holds(self, t: &KType) -> bool {
        match self {
            HornAtom::Leq(i, j) => i == j || matches!(t.rel(i, j), PairRelation::Eq | PairRelation::Lt),
            HornAtom::Lt(i, j) => i != j && t.rel(i, j) == PairRelation::Lt,
            HornAtom::Eq(i, j) => i == j || t.rel(i, j) == PairRelation::Eq,
        }
    }

    pub fn vars(self) -> (usize, usize) {
        match self {
            HornAtom::Leq(i, j) | HornAtom::Lt(i, j) | HornAtom::Eq(i, j) => (i, j),
        }
    }

    pub fn map(self, f: impl Fn(usize) -> usize) -> HornAtom {
        match self {
            HornAtom::Leq(i, j) => HornAtom::Leq(f(i), f(j)),
            HornAtom::Lt(i, j) => HornAtom::Lt(f(i), f(j)),
            HornAtom::Eq(i, j) => HornAtom::Eq(f(i), f(j)),
        }
    }

    fn to_qf(self) -> QfFormula {
        match self {
            HornAtom::Leq(i, j) => QfFormula::Order(i, Cmp::Le, j),
            HornAtom::Lt(i, j) => QfFormula::Order(i, Cmp::Lt, j),
            HornAtom::Eq(i, j) => QfFormula::Order(i, Cmp::Eq, j),
        }
    }
}

/// `body → head`, where a missing head means FALSE.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HornClause {
    pub body: Vec<HornAtom>,
    pub head: Option<HornAtom>,
}

impl HornClause {
    pub fn holds(&self, t: &KType) -> bool {
        !self.body.iter().all(|a| a.holds(t)) || self.head.is_some_and(|h| h.holds(t))
    }

    fn to_qf(&self) -> QfFormula {
        let body: Vec<QfFormula> = self.body.iter().map(|a| a.to_qf()).collect();
        let neg = match body.len() {
            0 => None,
            1 => Some(QfFormula::not(body.into_iter().next().unwrap())),
            _ => Some(QfFormula::not(QfFormula::and(body))),
        };
        match (neg, self.head) {
            (None, Some(h)) => h.to_qf(),
            (Some(n), Some(h)) => QfFormula::or(vec![n, h.to_qf()]),
            (Some(n), None) => n,
            // the empty clause
            (None, None) => QfFormula::Order(0, Cmp::Lt, 0),
        }
    }
}

/// A Horn definition of a relation, checked to be exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornTheory {
    name: String,
    arity: usize,
    dialect: Dialect,
    clauses: Vec<HornClause>,
}

/// Largest arity accepted by [`horn_synthesize`].
pub const HORN_MAX_ARITY: usize = 4;

impl HornTheory {
    /// Builds a theory, verifying that it defines exactly `table`.
    pub fn new(table: &RelationTable, dialect: Dialect, clauses: Vec<HornClause>) -> Result<Self, HornError> {
        let theory = HornTheory {
            name: table.name().to_string(),
            arity: table.arity(),
            dialect,
            clauses,
        };
        let defined = theory.compile()?;
        if defined.types() != table.types() {
            return Err(HornError::NotExact {
                name: table.name().to_string(),
            });
        }
        Ok(theory)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dialect(&self) -> Dialect {
        self.dialect
    }

    pub fn clauses(&self) -> &[HornClause] {
        &self.clauses
    }

    pub fn holds(&self, t: &KType) -> bool {
        self.clauses.iter().all(|c| c.holds(t))
    }

    /// The relation defined by the clauses.
    pub fn compile(&self) -> Result<RelationTable, HornError> {
        let diagonal = [KType::diagonal(0)];
        let types: &[KType] = if self.arity == 0 {
            &diagonal
        } else {
            enumerate_ktypes(self.arity).map_err(|_| HornError::ArityTooLarge {
                arity: self.arity,
                max: HORN_MAX_ARITY,
            })?
        };
        let keep = types.iter().filter(|t| self.holds(t)).cloned();
        Ok(RelationTable::new(self.name.clone(), self.arity, keep).expect("enumerated types are valid"))
    }

    /// The clauses as a formula over `v1..vk`.
    pub fn to_formula(&self) -> QfFormula {
        match self.clauses.len() {
            0 => QfFormula::Order(0, Cmp::Eq, 0),
            1 => self.clauses[0].to_qf(),
            _ => QfFormula::and(self.clauses.iter().map(HornClause::to_qf).collect()),
        }
    }

    /// The formula body of a `rel` line.
    pub fn formula_text(&self) -> String {
        let names: Vec<String> = (1..=self.arity.max(1)).map(|i| format!("v{i}")).collect();
        self.to_formula().render(&names)
    }

    /// A complete `rel` line for the instance format.
    pub fn to_rel_line(&self) -> String {
        format!("rel {} {} := {}", self.name, self.arity, self.formula_text())
    }
}

impl fmt::Display for HornTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_rel_line())
    }
}

/// The first pair of members whose image under `b` leaves the table.
pub fn closure_violation(table: &RelationTable, b: &BinaryBehaviour) -> Option<(KType, KType, KType)> {
    for s in table.iter() {
        for t in table.iter() {
            let img = binary_image(b, s, t).expect("embedding images are valid types");
            if !table.contains(&img) {
                return Some((s.clone(), t.clone(), img));
            }
        }
    }
    None
}

/// The smallest superset of `table` closed under `b`.
pub fn close_under(table: &RelationTable, b: &BinaryBehaviour) -> RelationTable {
    let mut types: Vec<KType> = table.iter().cloned().collect();
    let mut set = table.types().clone();
    let mut frontier = 0;
    while frontier < types.len() {
        let end = types.len();
        for a in 0..end {
            for c in frontier..end {
                for (s, t) in [(a, c), (c, a)] {
                    let img = binary_image(b, &types[s], &types[t]).expect("embedding images are valid types");
                    if set.insert(img.clone()) {
                        types.push(img);
                    }
                }
            }
        }
        frontier = end;
    }
    RelationTable::new(table.name(), table.arity(), set).expect("closure of valid types")
}

fn truth_mask(atoms: &[HornAtom], t: &KType) -> u32 {
    atoms
        .iter()
        .enumerate()
        .filter(|(_, a)| a.holds(t))
        .fold(0, |m, (i, _)| m | 1 << i)
}

fn clause_valid(members: &[u32], body: u32, head: Option<usize>) -> bool {
    members
        .iter()
        .all(|&r| r & body != body || head.is_some_and(|h| r >> h & 1 == 1))
}

fn kills(t: u32, body: u32, head: Option<usize>) -> bool {
    t & body == body && !head.is_some_and(|h| t >> h & 1 == 1)
}

/// Synthesises a Horn definition of `table` in the given dialect.
pub fn horn_synthesize(table: &RelationTable, dialect: Dialect) -> Result<HornTheory, HornError> {
    let k = table.arity();
    if k > HORN_MAX_ARITY {
        return Err(HornError::ArityTooLarge {
            arity: k,
            max: HORN_MAX_ARITY,
        });
    }
    if k < 2 {
        let clauses = if table.is_empty() {
            vec![HornClause { body: vec![], head: None }]
        } else {
            vec![]
        };
        return HornTheory::new(table, dialect, clauses);
    }
    let atoms = dialect.atoms(k);
    let all = enumerate_ktypes(k).expect("arity within range");
    let members: Vec<u32> = table.iter().map(|t| truth_mask(&atoms, t)).collect();
    let outsiders: Vec<u32> = all
        .iter()
        .filter(|t| !table.contains(t))
        .map(|t| truth_mask(&atoms, t))
        .collect();

    // (body mask, head atom index or None for FALSE)
    let mut clauses: Vec<(u32, Option<usize>)> = Vec::new();
    for &t in &outsiders {
        if clauses.iter().any(|&(b, h)| kills(t, b, h)) {
            continue;
        }
        let above = members.iter().filter(|&&r| r & t == t).fold(u32::MAX, |acc, &r| acc & r);
        let head = if members.iter().all(|&r| r & t != t) {
            None
        } else {
            let extra = above & !t;
            if extra == 0 {
                return Err(HornError::NotHornExpressible {
                    name: table.name().to_string(),
                    dialect,
                    violation: closure_violation(table, &dialect.behaviour()).map(Box::new),
                });
            }
            Some(extra.trailing_zeros() as usize)
        };
        let mut body = t;
        for i in 0..atoms.len() {
            let bit = 1u32 << i;
            if body & bit != 0 && clause_valid(&members, body & !bit, head) {
                body &= !bit;
            }
        }
        clauses.push((body, head));
    }

    // drop clauses whose kills are all covered by others
    let kill_sets: Vec<Vec<usize>> = clauses
        .iter()
        .map(|&(b, h)| (0..outsiders.len()).filter(|&o| kills(outsiders[o], b, h)).collect())
        .collect();
    let mut cover = vec![0usize; outsiders.len()];
    for ks in &kill_sets {
        for &o in ks {
            cover[o] += 1;
        }
    }
    let mut keep = vec![true; clauses.len()];
    for (c, ks) in kill_sets.iter().enumerate() {
        if ks.iter().all(|&o| cover[o] >= 2) {
            keep[c] = false;
            for &o in ks {
                cover[o] -= 1;
            }
        }
    }

    let out: Vec<HornClause> = clauses
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(&(b, h), _)| HornClause {
            body: (0..atoms.len()).filter(|i| b >> i & 1 == 1).map(|i| atoms[i]).collect(),
            head: h.map(|i| atoms[i]),
        })
        .collect();
    HornTheory::new(table, dialect, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{builtin, parse_qf, compile_qf, SignatureEnv};
    use crate::poset::RelSet;
    use PairRelation::*;

    #[test]
    fn leq_is_a_unit_clause() {
        let t = builtin("<=").unwrap();
        let th = horn_synthesize(t, Dialect::Leq).unwrap();
        assert_eq!(
            th.clauses(),
            &[HornClause {
                body: vec![],
                head: Some(HornAtom::Leq(0, 1))
            }]
        );
        assert_eq!(th.formula_text(), "v1 <= v2");
    }

    #[test]
    fn incomparability() {
        let t = RelationTable::binary("inc", RelSet::single(Inc));
        let th = horn_synthesize(&t, Dialect::Leq).unwrap();
        assert_eq!(th.compile().unwrap().types(), t.types());
        assert!(th.clauses().iter().all(|c| c.head.is_none() && c.body.len() == 1));
        assert_eq!(th.clauses().len(), 2);
    }

    #[test]
    fn par_and_low() {
        let par = builtin("Par").unwrap();
        assert!(closure_violation(par, &BinaryBehaviour::e_leq()).is_none());
        horn_synthesize(par, Dialect::Leq).unwrap();

        let low = builtin("Low").unwrap();
        match horn_synthesize(low, Dialect::Leq) {
            Err(HornError::NotHornExpressible { violation: Some(v), .. }) => {
                assert!(!low.contains(&v.2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn strict_dialect() {
        let lt = builtin("<").unwrap();
        let th = horn_synthesize(lt, Dialect::Strict).unwrap();
        assert_eq!(th.formula_text(), "v1 < v2");
        let ne = builtin("!=").unwrap();
        let th = horn_synthesize(ne, Dialect::Strict).unwrap();
        assert_eq!(th.formula_text(), "!(v1 = v2)");
        // <= is not closed under e_<: (EQ, LT) goes to INC
        assert!(matches!(
            horn_synthesize(builtin("<=").unwrap(), Dialect::Strict),
            Err(HornError::NotHornExpressible { .. })
        ));
    }

    #[test]
    fn rel_lines_round_trip() {
        let env = SignatureEnv::standard();
        for name in ["Par", "<", "#", "!=", "<="] {
            let t = builtin(name).unwrap();
            let th = horn_synthesize(t, Dialect::Leq).unwrap();
            let names = ["v1", "v2", "v3"];
            let f = parse_qf(&th.formula_text(), &names[..t.arity()], env).unwrap();
            let back = compile_qf(name, &f, t.arity(), env).unwrap();
            assert_eq!(back.types(), t.types(), "{name}: {}", th.formula_text());
        }
    }

    #[test]
    fn empty_and_full() {
        let empty = RelationTable::new("none", 2, Vec::new()).unwrap();
        let th = horn_synthesize(&empty, Dialect::Leq).unwrap();
        assert!(th.compile().unwrap().is_empty());
        let full = RelationTable::full("all", 3).unwrap();
        let th = horn_synthesize(&full, Dialect::Strict).unwrap();
        assert!(th.clauses().is_empty());
        assert_eq!(th.formula_text(), "v1 = v1");
    }

    #[test]
    fn closure_helper() {
        let t = RelationTable::binary("lt_gt", RelSet::of(&[Lt, Gt]));
        let c = close_under(&t, &BinaryBehaviour::e_leq());
        assert_eq!(c.as_relset(), Some(RelSet::of(&[Lt, Gt, Inc])));
        assert!(closure_violation(&c, &BinaryBehaviour::e_leq()).is_none());
        assert_eq!(Dialect::Leq.atoms(3).len(), 6);
        assert_eq!(Dialect::Strict.atoms(3).len(), 9);
        assert_eq!(Dialect::Strict.atoms(4).len(), 18);
    }

    #[test]
    fn arity_cap() {
        let big = RelationTable::full("big", 5).unwrap();
        assert!(matches!(
            horn_synthesize(&big, Dialect::Leq),
            Err(HornError::ArityTooLarge { arity: 5, max: 4 })
        ));
    }
}
