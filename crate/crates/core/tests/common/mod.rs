#![allow(dead_code)]

use std::collections::BTreeSet;

use posetcsp::poset::PairRelation::{self, Eq as E, Gt as G, Inc as I, Lt as L};
use posetcsp::solver::{export_cnf, random_instance, Cnf, Instance, Profile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BUILTINS: [&str; 7] = ["<", "<=", "#", "Betw", "Cycl", "Par", "Low"];

/// A seeded instance with 1..=max_vars variables and at most one constraint
/// more than variables, each over a random builtin relation.
pub fn mixed_instance(seed: u64, max_vars: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.gen_range(1..=max_vars);
    let mut counts = [0usize; BUILTINS.len()];
    for _ in 0..rng.gen_range(0..=n + 1) {
        counts[rng.gen_range(0..BUILTINS.len())] += 1;
    }
    let entries = BUILTINS.iter().zip(counts).map(|(b, c)| (b.to_string(), c)).collect();
    random_instance(seed, n, &Profile::new(entries).unwrap())
}

/// e_< written out entry by entry; rows and columns in the order =, <, >, ⊥.
pub const GOLDEN_E_LT: [[PairRelation; 4]; 4] = [
    [E, I, I, I],
    [I, L, I, I],
    [I, I, G, I],
    [I, I, I, I],
];

/// e_≤ written out entry by entry.
pub const GOLDEN_E_LEQ: [[PairRelation; 4]; 4] = [
    [E, L, G, I],
    [L, L, I, I],
    [G, I, G, I],
    [I, I, I, I],
];

/// Does every pair carry at-least-one and at-most-one clauses over its four
/// literals? If so, every non-one-hot assignment is a non-model.
pub fn has_exactly_one_clauses(cnf: &Cnf, n: usize) -> bool {
    let clauses: BTreeSet<Vec<i32>> = cnf
        .clauses()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort();
            c
        })
        .collect();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            let lits: Vec<i32> = PairRelation::ALL.iter().map(|&r| cnf.literal(i, j, r)).collect();
            let mut alo = lits.clone();
            alo.sort();
            let amo = (0..4).all(|a| {
                (a + 1..4).all(|b| {
                    let mut c = vec![-lits[a], -lits[b]];
                    c.sort();
                    clauses.contains(&c)
                })
            });
            clauses.contains(&alo) && amo
        })
    })
}

/// Enumerates the models of the exported CNF among one-hot assignments.
/// Returns (some model exists, every model decodes to a solution).
pub fn cnf_models(inst: &Instance) -> (bool, bool) {
    let n = inst.var_count();
    let cnf = export_cnf(inst).unwrap();
    assert!(has_exactly_one_clauses(&cnf, n));
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut any = false;
    let mut all_decode = true;
    for code in 0..4usize.pow(pairs.len() as u32) {
        let mut assign = vec![false; cnf.var_count()];
        let mut c = code;
        for &(i, j) in &pairs {
            let lit = cnf.literal(i, j, PairRelation::ALL[c % 4]);
            assign[lit as usize - 1] = true;
            c /= 4;
        }
        if cnf.is_satisfied(&assign) {
            any = true;
            all_decode &= cnf.decode(&assign).is_some_and(|t| inst.satisfied_by(&t));
        }
    }
    (any, all_decode)
}
