use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use posetcsp::horn::{close_under, closure_violation, horn_scaling_instance, horn_solve, horn_synthesize, Dialect};
use posetcsp::poset::{enumerate_ktypes, KType, PairRelation};
use posetcsp::solver::solve;
use posetcsp::table::RelationTable;
use proptest::prelude::*;

fn closed_table(dialect: Dialect, arity: usize, picks: &[usize]) -> RelationTable {
    let all = enumerate_ktypes(arity).unwrap();
    let seed: BTreeSet<KType> = picks.iter().map(|&i| all[i % all.len()].clone()).collect();
    let t = RelationTable::new("R", arity, seed).unwrap();
    close_under(&t, &dialect.behaviour())
}

fn leq(t: &KType, i: usize, j: usize) -> bool {
    matches!(t.rel(i, j), PairRelation::Eq | PairRelation::Lt)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_tables_are_horn(
        arity in 2usize..=3,
        picks in proptest::collection::vec(0usize..1000, 0..5),
        strict in any::<bool>(),
    ) {
        let dialect = if strict { Dialect::Strict } else { Dialect::Leq };
        let table = closed_table(dialect, arity, &picks);
        prop_assert!(closure_violation(&table, &dialect.behaviour()).is_none());
        let th = horn_synthesize(&table, dialect);
        prop_assert!(th.is_ok(), "{:?}", th.err());
        let th = th.unwrap();
        let compiled = th.compile().unwrap();
        prop_assert_eq!(compiled.types(), table.types());
        for t in enumerate_ktypes(arity).unwrap() {
            prop_assert_eq!(th.holds(t), table.contains(t));
        }
    }

    #[test]
    fn synthesis_failure_comes_with_a_violation(
        picks in proptest::collection::vec(0usize..29, 1..6),
        strict in any::<bool>(),
    ) {
        let dialect = if strict { Dialect::Strict } else { Dialect::Leq };
        let all = enumerate_ktypes(3).unwrap();
        let types: BTreeSet<KType> = picks.iter().map(|&i| all[i].clone()).collect();
        let table = RelationTable::new("R", 3, types).unwrap();
        let closed = closure_violation(&table, &dialect.behaviour()).is_none();
        prop_assert_eq!(horn_synthesize(&table, dialect).is_ok(), closed);
    }

    #[test]
    fn horn_solve_matches_generic_solve(seed in any::<u64>(), n in 2usize..=6, m in 0usize..14) {
        let (inst, theories) = horn_scaling_instance(seed, n, m);
        let horn = horn_solve(&inst, &theories).unwrap();
        prop_assert_eq!(horn.is_sat(), solve(&inst).is_sat());
        if let Some(w) = horn.witness() {
            prop_assert!(inst.satisfied_by(&w.ktype));
        }
    }

    #[test]
    fn leq_witness_is_the_least_model(seed in any::<u64>(), n in 2usize..=5, m in 0usize..10) {
        let (inst, theories) = horn_scaling_instance(seed, n, m);
        if let Some(w) = horn_solve(&inst, &theories).unwrap().witness() {
            for t in enumerate_ktypes(n).unwrap().iter().filter(|t| inst.satisfied_by(t)) {
                for i in 0..n {
                    for j in 0..n {
                        if i != j && leq(&w.ktype, i, j) {
                            prop_assert!(leq(t, i, j), "{} not below {}", w.ktype, t);
                        }
                    }
                }
            }
        }
    }
}

fn time_scaling(n: usize) -> Duration {
    let (inst, theories) = horn_scaling_instance(7, n, 4 * n);
    let start = Instant::now();
    horn_solve(&inst, &theories).unwrap();
    start.elapsed()
}

#[test]
fn scaling_is_at_most_cubic() {
    time_scaling(60);
    let small = time_scaling(125);
    let large = time_scaling(500);
    // 4x the variables: cubic growth allows 64x, with slack for noise
    assert!(
        large <= small * 256 + Duration::from_millis(200),
        "125 vars: {small:?}, 500 vars: {large:?}"
    );
}
