use std::collections::BTreeSet;

use posetcsp::formula::{
    compile_qf, parse_pp, parse_qf, pp_to_table, Atom, Cmp, PpFormula, QfFormula, SignatureEnv,
};
use posetcsp::poset::{enumerate_ktypes, KType};
use proptest::prelude::*;

const TERNARY: [&str; 4] = ["Betw", "Cycl", "Par", "Low"];

fn atom(n: usize) -> impl Strategy<Value = QfFormula> {
    prop_oneof![
        (0..n, 0..Cmp::ALL.len(), 0..n).prop_map(|(a, c, b)| QfFormula::Order(a, Cmp::ALL[c], b)),
        (0..TERNARY.len(), proptest::collection::vec(0..n, 3))
            .prop_map(|(r, args)| QfFormula::Rel(TERNARY[r].to_string(), args)),
    ]
}

fn formula(n: usize) -> impl Strategy<Value = QfFormula> {
    atom(n).prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(QfFormula::not),
            proptest::collection::vec(inner.clone(), 1..3).prop_map(QfFormula::and),
            proptest::collection::vec(inner, 1..3).prop_map(QfFormula::or),
        ]
    })
}

fn with_arity() -> impl Strategy<Value = (usize, QfFormula, QfFormula)> {
    (1usize..=3).prop_flat_map(|n| (Just(n), formula(n), formula(n)))
}

fn types(env: &SignatureEnv, f: &QfFormula, n: usize) -> BTreeSet<KType> {
    compile_qf("t", f, n, env).unwrap().types().clone()
}

fn pp_types(env: &SignatureEnv, f: &PpFormula) -> BTreeSet<KType> {
    pp_to_table("p", f, env).unwrap().types().clone()
}

fn pp_atom(n: usize) -> impl Strategy<Value = Atom> {
    prop_oneof![
        (0..n, 0..Cmp::ALL.len(), 0..n).prop_map(|(a, c, b)| Atom::Order(a, Cmp::ALL[c], b)),
        (0..TERNARY.len(), proptest::collection::vec(0..n, 3))
            .prop_map(|(r, args)| Atom::Rel(TERNARY[r].to_string(), args)),
    ]
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn connectives_map_to_set_operations((n, f, g) in with_arity()) {
        let env = SignatureEnv::standard();
        let all: BTreeSet<KType> = enumerate_ktypes(n).unwrap().iter().cloned().collect();
        let tf = types(env, &f, n);
        let tg = types(env, &g, n);
        let and = types(env, &QfFormula::and(vec![f.clone(), g.clone()]), n);
        let or = types(env, &QfFormula::or(vec![f.clone(), g.clone()]), n);
        let not = types(env, &QfFormula::not(f.clone()), n);
        prop_assert_eq!(and, tf.intersection(&tg).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(or, tf.union(&tg).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(not, all.difference(&tf).cloned().collect::<BTreeSet<_>>());
    }

    #[test]
    fn rendering_round_trips((n, f, _g) in with_arity()) {
        let env = SignatureEnv::standard();
        let vars = names("x", n);
        let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
        let text = f.render(&vars);
        let back = parse_qf(&text, &refs, env).unwrap();
        prop_assert_eq!(types(env, &back, n), types(env, &f, n));
    }

    #[test]
    fn quantifier_free_pp_equals_compiled_conjunction(
        (n, atoms) in (1usize..=3).prop_flat_map(|n| (Just(n), proptest::collection::vec(pp_atom(n), 1..4)))
    ) {
        let env = SignatureEnv::standard();
        let pp = PpFormula::new(names("v", n), vec![], atoms.clone());
        let qf = QfFormula::and(atoms.iter().map(Atom::to_qf).collect());
        prop_assert_eq!(pp_types(env, &pp), types(env, &qf, n));
    }

    #[test]
    fn extra_conjunct_never_enlarges(
        (atoms, extra) in proptest::collection::vec(pp_atom(4), 1..4).prop_flat_map(|a| (Just(a), pp_atom(4)))
    ) {
        let env = SignatureEnv::standard();
        // two free, two bound
        let pp = PpFormula::new(names("v", 2), names("u", 2), atoms);
        let bigger = pp_types(env, &pp);
        let smaller = pp_types(env, &pp.with_atom(extra));
        prop_assert!(smaller.is_subset(&bigger));
    }
}

#[test]
fn lowbot_pp_table() {
    let env = SignatureEnv::standard();
    let f = parse_pp("exists z . z < y & z # x", &["x", "y"], env).unwrap();
    let t = pp_to_table("lowbot", &f, env).unwrap();
    let expected = compile_qf("e", &parse_qf("x < y | x # y", &["x", "y"], env).unwrap(), 2, env).unwrap();
    assert_eq!(t.types(), expected.types());
}
