use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::theory::{Dialect, HornAtom, HornClause, HornTheory};
use super::HornError;
use crate::formula::{compile_qf, parse_qf, SignatureEnv};
use crate::poset::{KType, PairRelation};
use crate::solver::{Instance, SolveResult, Witness};

/// Square bit matrix.
#[derive(Clone, Debug)]
struct Bits {
    words: usize,
    data: Vec<u64>,
}

impl Bits {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Bits {
            words,
            data: vec![0; words * n],
        }
    }

    fn get(&self, x: usize, y: usize) -> bool {
        self.data[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    fn set(&mut self, x: usize, y: usize) {
        self.data[x * self.words + y / 64] |= 1 << (y % 64);
    }

    fn row(&self, x: usize) -> &[u64] {
        &self.data[x * self.words..(x + 1) * self.words]
    }

    /// `row(x) |= other.row(y)`; returns whether anything changed.
    fn or_row(&mut self, x: usize, other: &[u64]) -> bool {
        let mut changed = false;
        for (w, &o) in self.data[x * self.words..(x + 1) * self.words].iter_mut().zip(other) {
            let next = *w | o;
            changed |= next != *w;
            *w = next;
        }
        changed
    }
}

/// Derived `≤` (reflexive-transitive) and `<` over the instance variables.
struct Closure {
    n: usize,
    leq: Bits,
    lt: Bits,
    conflict: bool,
}

impl Closure {
    fn new(n: usize) -> Self {
        let mut leq = Bits::new(n);
        for i in 0..n {
            leq.set(i, i);
        }
        Closure {
            n,
            leq,
            lt: Bits::new(n),
            conflict: false,
        }
    }

    /// Adds `a ≤ b` (or `a < b` when `strict`) and closes transitively.
    fn add_edge(&mut self, a: usize, b: usize, strict: bool) -> bool {
        if self.leq.get(a, b) && (!strict || self.lt.get(a, b)) {
            return false;
        }
        let leq_b = self.leq.row(b).to_vec();
        let lt_b = self.lt.row(b).to_vec();
        let mut changed = false;
        for x in 0..self.n {
            if !self.leq.get(x, a) {
                continue;
            }
            changed |= self.leq.or_row(x, &leq_b);
            changed |= self.lt.or_row(x, &lt_b);
            if strict || self.lt.get(x, a) {
                changed |= self.lt.or_row(x, &leq_b);
            }
            if self.lt.get(x, x) {
                self.conflict = true;
            }
        }
        changed
    }

    fn holds(&self, atom: HornAtom) -> bool {
        match atom {
            HornAtom::Leq(i, j) => self.leq.get(i, j),
            HornAtom::Lt(i, j) => self.lt.get(i, j),
            HornAtom::Eq(i, j) => self.leq.get(i, j) && self.leq.get(j, i),
        }
    }

    fn assert(&mut self, atom: HornAtom) -> bool {
        match atom {
            HornAtom::Leq(i, j) => self.add_edge(i, j, false),
            HornAtom::Lt(i, j) => self.add_edge(i, j, true),
            HornAtom::Eq(i, j) => {
                let a = self.add_edge(i, j, false);
                let b = self.add_edge(j, i, false);
                a || b
            }
        }
    }

    fn witness(&self) -> KType {
        KType::from_fn(self.n, |i, j| {
            let (f, b) = (self.leq.get(i, j), self.leq.get(j, i));
            match (f, b) {
                (true, true) => PairRelation::Eq,
                (true, false) => PairRelation::Lt,
                (false, true) => PairRelation::Gt,
                (false, false) => PairRelation::Inc,
            }
        })
        .expect("a conflict-free closure is a partial preorder")
    }
}

enum Ground {
    True,
    False,
    Atom(HornAtom),
}

fn ground(atom: HornAtom, args: &[usize]) -> Ground {
    let a = atom.map(|i| args[i]);
    let (i, j) = a.vars();
    if i != j {
        return Ground::Atom(a);
    }
    match a {
        HornAtom::Lt(..) => Ground::False,
        HornAtom::Leq(..) | HornAtom::Eq(..) => Ground::True,
    }
}

/// Decides an instance whose relations all have Horn theories of one
/// dialect, by unit propagation over the derived order.
pub fn horn_solve(inst: &Instance, theories: &[HornTheory]) -> Result<SolveResult, HornError> {
    if !inst.pins().is_empty() {
        return Err(HornError::PinnedPairs);
    }
    let mut by_name: BTreeMap<&str, &HornTheory> = BTreeMap::new();
    let mut dialect: Option<Dialect> = None;
    for th in theories {
        match dialect {
            Some(d) if d != th.dialect() => {
                return Err(HornError::DialectMismatch {
                    expected: d,
                    found: th.dialect(),
                    name: th.name().to_string(),
                })
            }
            _ => dialect = Some(th.dialect()),
        }
        by_name.insert(th.name(), th);
    }

    let mut clauses: Vec<HornClause> = Vec::new();
    for c in inst.constraints() {
        let th = by_name
            .get(c.relation.as_str())
            .ok_or_else(|| HornError::MissingTheory(c.relation.clone()))?;
        if th.arity() != c.args.len() {
            return Err(HornError::MissingTheory(c.relation.clone()));
        }
        'clauses: for cl in th.clauses() {
            let mut body = Vec::with_capacity(cl.body.len());
            for &a in &cl.body {
                match ground(a, &c.args) {
                    Ground::True => {}
                    Ground::False => continue 'clauses,
                    Ground::Atom(g) => body.push(g),
                }
            }
            let head = match cl.head.map(|h| ground(h, &c.args)) {
                None | Some(Ground::False) => None,
                Some(Ground::True) => continue 'clauses,
                Some(Ground::Atom(g)) => Some(g),
            };
            clauses.push(HornClause { body, head });
        }
    }

    let mut cl = Closure::new(inst.var_count());
    let mut fired = vec![false; clauses.len()];
    loop {
        let mut progress = false;
        for (k, c) in clauses.iter().enumerate() {
            if fired[k] || !c.body.iter().all(|&a| cl.holds(a)) {
                continue;
            }
            fired[k] = true;
            progress = true;
            match c.head {
                None => return Ok(SolveResult::Unsat),
                Some(h) => {
                    cl.assert(h);
                    if cl.conflict {
                        return Ok(SolveResult::Unsat);
                    }
                }
            }
        }
        if !progress {
            break;
        }
    }
    Ok(SolveResult::Sat(Witness {
        vars: inst.vars().to_vec(),
        ktype: cl.witness(),
    }))
}

/// Relations of the scaling family, in the leq dialect.
pub const SCALING_RELATIONS: [(&str, usize, &str); 3] = [
    ("Le", 2, "v1 <= v2"),
    ("Imp4", 4, "!(v1 <= v2) | v3 <= v4"),
    ("Neg", 2, "!(v1 <= v2)"),
];

/// A seeded random Horn instance over `n` variables with `m` constraints:
/// mostly implications, some unit facts and a few negative clauses.
pub fn horn_scaling_instance(seed: u64, n: usize, m: usize) -> (Instance, Vec<HornTheory>) {
    let mut env = SignatureEnv::new();
    let mut theories = Vec::new();
    for (name, arity, body) in SCALING_RELATIONS {
        let names: Vec<String> = (1..=arity).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let f = parse_qf(body, &refs, &SignatureEnv::order_only()).expect("scaling relation parses");
        let table = compile_qf(name, &f, arity, &SignatureEnv::order_only()).expect("scaling relation compiles");
        theories.push(super::horn_synthesize(&table, Dialect::Leq).expect("scaling relations are Horn"));
        env.insert(table).expect("distinct names");
    }
    let mut inst = Instance::new(env);
    for i in 0..n {
        inst.add_var(format!("x{}", i + 1));
    }
    if n < 2 {
        return (inst, theories);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |rng: &mut ChaCha8Rng| rng.gen_range(0..n);
    for _ in 0..m {
        let roll = rng.gen_range(0..100);
        let (name, arity) = match roll {
            0..=19 => ("Le", 2),
            20..=97 => ("Imp4", 4),
            _ => ("Neg", 2),
        };
        let args: Vec<usize> = (0..arity).map(|_| pick(&mut rng)).collect();
        inst.add_constraint(name, &args).expect("scaling constraints are well formed");
    }
    (inst, theories)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::builtin;
    use crate::horn::horn_synthesize;
    use crate::solver::solve;

    fn leq_theory() -> HornTheory {
        horn_synthesize(builtin("<=").unwrap(), Dialect::Leq).unwrap()
    }

    #[test]
    fn leq_chain_with_negative_clause() {
        let mut inst = Instance::with_vars(3);
        inst.add_constraint("<=", &[0, 1]).unwrap();
        inst.add_constraint("<=", &[1, 2]).unwrap();
        let sat = horn_solve(&inst, &[leq_theory()]).unwrap();
        let w = sat.witness().unwrap();
        assert_eq!(w.ktype.rel(0, 2), PairRelation::Lt);

        // x ≤ z → FALSE
        let mut env = SignatureEnv::standard().clone();
        let f = parse_qf("!(v1 <= v2)", &["v1", "v2"], &env).unwrap();
        let nle = compile_qf("Nle", &f, 2, &env).unwrap();
        env.insert(nle.clone()).unwrap();
        let mut inst2 = Instance::new(env);
        for v in ["x", "y", "z"] {
            inst2.add_var(v);
        }
        inst2.add_constraint("<=", &[0, 1]).unwrap();
        inst2.add_constraint("<=", &[1, 2]).unwrap();
        inst2.add_constraint("Nle", &[0, 2]).unwrap();
        let th = vec![leq_theory(), horn_synthesize(&nle, Dialect::Leq).unwrap()];
        assert_eq!(horn_solve(&inst2, &th).unwrap(), SolveResult::Unsat);
        assert_eq!(solve(&inst2), SolveResult::Unsat);
    }

    #[test]
    fn mutual_leq_merges() {
        let mut inst = Instance::with_vars(2);
        inst.add_constraint("<=", &[0, 1]).unwrap();
        inst.add_constraint("<=", &[1, 0]).unwrap();
        let w = horn_solve(&inst, &[leq_theory()]).unwrap();
        assert_eq!(w.witness().unwrap().ktype.rel(0, 1), PairRelation::Eq);
    }

    #[test]
    fn strict_cycle() {
        let lt = horn_synthesize(builtin("<").unwrap(), Dialect::Strict).unwrap();
        let mut inst = Instance::with_vars(3);
        inst.add_constraint("<", &[0, 1]).unwrap();
        inst.add_constraint("<", &[1, 2]).unwrap();
        inst.add_constraint("<", &[2, 0]).unwrap();
        assert_eq!(horn_solve(&inst, std::slice::from_ref(&lt)).unwrap(), SolveResult::Unsat);

        let eq = horn_synthesize(builtin("=").unwrap(), Dialect::Strict).unwrap();
        let mut inst = Instance::with_vars(2);
        inst.add_constraint("<", &[0, 1]).unwrap();
        inst.add_constraint("=", &[0, 1]).unwrap();
        assert_eq!(horn_solve(&inst, &[lt, eq]).unwrap(), SolveResult::Unsat);
    }

    #[test]
    fn errors() {
        let lt = horn_synthesize(builtin("<").unwrap(), Dialect::Strict).unwrap();
        let mut inst = Instance::with_vars(2);
        inst.add_constraint("<=", &[0, 1]).unwrap();
        assert!(matches!(
            horn_solve(&inst, &[leq_theory(), lt.clone()]),
            Err(HornError::DialectMismatch { .. })
        ));
        assert!(matches!(horn_solve(&inst, &[lt]), Err(HornError::MissingTheory(_))));
    }

    #[test]
    fn scaling_family_agrees_small() {
        for seed in 0..30 {
            let (inst, th) = horn_scaling_instance(seed, 6, 8);
            let h = horn_solve(&inst, &th).unwrap();
            assert_eq!(h.is_sat(), solve(&inst).is_sat(), "seed {seed}");
            if let Some(w) = h.witness() {
                assert!(inst.satisfied_by(&w.ktype));
            }
        }
    }
}
