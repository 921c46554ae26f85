mod common;

use common::{cnf_models, mixed_instance};
use posetcsp::poset::{enumerate_ktypes, RelSet};
use posetcsp::solver::{brute_force, export_cnf, parse_instance, solve, write_instance, InstanceFile, SolveResult};
use proptest::prelude::*;

#[test]
fn cnf_rejects_non_one_hot_assignments() {
    let inst = mixed_instance(3, 3);
    let cnf = export_cnf(&inst).unwrap();
    let n = cnf.var_count();
    for mask in 0u32..(1 << n.min(12)) {
        let assign: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        let one_hot = (0..n / 4).all(|p| (0..4).filter(|&r| assign[p * 4 + r]).count() == 1);
        if !one_hot {
            assert!(!cnf.is_satisfied(&assign));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn backtracking_matches_brute_force(seed in any::<u64>()) {
        let inst = mixed_instance(seed, 6);
        let a = solve(&inst);
        let b = brute_force(&inst).unwrap();
        prop_assert_eq!(a.is_sat(), b.is_sat());
        for r in [&a, &b] {
            if let Some(w) = r.witness() {
                prop_assert!(inst.satisfied_by(&w.ktype));
            }
        }
    }

    #[test]
    fn cnf_agrees_with_solver(seed in any::<u64>()) {
        let inst = mixed_instance(seed, 4);
        let (sat, decoded) = cnf_models(&inst);
        prop_assert_eq!(sat, solve(&inst).is_sat());
        prop_assert!(decoded);
    }

    #[test]
    fn pinning_is_consistent(seed in any::<u64>(), i in 0usize..6, j in 0usize..6, r in 0usize..4) {
        let inst = mixed_instance(seed, 6);
        let n = inst.var_count();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let rel = posetcsp::poset::PairRelation::ALL[r];
        let mut pinned = inst.clone();
        pinned.pin(i, j, RelSet::single(rel)).unwrap();
        let exists = enumerate_ktypes(n)
            .unwrap()
            .iter()
            .any(|t| inst.satisfied_by(t) && t.rel(i, j) == rel);
        match solve(&pinned) {
            SolveResult::Sat(w) => {
                prop_assert!(exists);
                prop_assert_eq!(w.ktype.rel(i, j), rel);
            }
            SolveResult::Unsat => prop_assert!(!exists),
        }
    }

    #[test]
    fn instance_text_round_trips(seed in any::<u64>()) {
        let inst = mixed_instance(seed, 6);
        let file = InstanceFile::from_instance(inst);
        let text = write_instance(&file);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(write_instance(&back), text);
        prop_assert_eq!(solve(&back.instance).is_sat(), solve(&file.instance).is_sat());
    }
}
