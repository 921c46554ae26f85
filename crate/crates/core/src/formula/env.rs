use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use super::parser::parse_qf;
use super::semantics::compile_qf;
use super::FormulaError;
use crate::table::{order_relation, RelationTable};

/// Names of the order comparisons available as binary relations.
pub const ORDER_RELATIONS: [&str; 7] = ["<", "<=", ">", ">=", "=", "!=", "#"];

/// The named relations preloaded in the standard environment, with their
/// defining formulas. Later entries may refer to earlier ones.
pub const BUILTIN_DEFINITIONS: [(&str, &[&str], &str); 8] = [
    ("Betw", &["x", "y", "z"], "(x < y & y < z) | (z < y & y < x)"),
    (
        "Cycl",
        &["x", "y", "z"],
        "(x < y & y < z) | (y < z & z < x) | (z < x & x < y) \
         | (x < y & z # x & z # y) | (y < z & x # y & x # z) | (z < x & y # z & y # x)",
    ),
    (
        "Par",
        &["x", "y", "z"],
        "(x # y & x # z & y # z) | (x < y & x < z & y # z) | (x > y & x > z & y # z)",
    ),
    (
        "Sep",
        &["x", "y", "z", "t"],
        "(Cycl(x,y,z) & Cycl(y,z,t) & Cycl(x,y,t) & Cycl(x,z,t)) \
         | (Cycl(z,y,x) & Cycl(t,z,y) & Cycl(t,y,x) & Cycl(t,z,x))",
    ),
    ("Low", &["x", "y", "z"], "(x < y & z # x & z # y) | (x < z & y # x & y # z)"),
    ("Abv", &["x", "y", "z"], "(y < x & x # z & y # z) | (z < x & x # y & z # y)"),
    ("U", &["x", "y", "z"], "(y < x | z < x) & y # z"),
    (
        "S",
        &["x1", "x2", "y1", "y2"],
        "(x1 < x2 & y1 # y2) | (x1 # x2 & y1 < y2)",
    ),
];

/// A signature: relation names mapped to their tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignatureEnv {
    tables: BTreeMap<String, Arc<RelationTable>>,
}

impl SignatureEnv {
    pub fn new() -> Self {
        Self::default()
    }

    /// Order comparisons plus the builtin named relations.
    pub fn standard() -> &'static SignatureEnv {
        static STANDARD: OnceLock<SignatureEnv> = OnceLock::new();
        STANDARD.get_or_init(|| build_standard().expect("builtin definitions compile"))
    }

    /// An environment holding only the order comparisons.
    pub fn order_only() -> SignatureEnv {
        let mut env = SignatureEnv::new();
        for sym in ORDER_RELATIONS {
            env.insert(order_relation(sym).unwrap()).unwrap();
        }
        env
    }

    /// The sub-environment with the listed names; unknown names are an error.
    pub fn restricted(&self, names: &[&str]) -> Result<SignatureEnv, FormulaError> {
        let mut env = SignatureEnv::new();
        for &n in names {
            let t = self
                .tables
                .get(n)
                .ok_or_else(|| FormulaError::UnknownRelation { name: n.to_string() })?;
            env.tables.insert(n.to_string(), Arc::clone(t));
        }
        Ok(env)
    }

    pub fn insert(&mut self, table: RelationTable) -> Result<(), FormulaError> {
        self.insert_arc(Arc::new(table))
    }

    pub fn insert_arc(&mut self, table: Arc<RelationTable>) -> Result<(), FormulaError> {
        if self.tables.contains_key(table.name()) {
            return Err(FormulaError::DuplicateRelation {
                name: table.name().to_string(),
            });
        }
        self.tables.insert(table.name().to_string(), table);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&RelationTable> {
        self.tables.get(name).map(Arc::as_ref)
    }

    pub fn get_arc(&self, name: &str) -> Option<&Arc<RelationTable>> {
        self.tables.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.tables.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.tables.keys().map(String::as_str)
    }

    pub fn tables(&self) -> impl Iterator<Item = &RelationTable> {
        self.tables.values().map(Arc::as_ref)
    }
}

fn build_standard() -> Result<SignatureEnv, FormulaError> {
    let mut env = SignatureEnv::order_only();
    for (name, vars, body) in BUILTIN_DEFINITIONS {
        let f = parse_qf(body, vars, &env)?;
        let table = compile_qf(name, &f, vars.len(), &env)?;
        env.insert(table)?;
    }
    Ok(env)
}

/// A builtin relation by name (order comparison or named relation).
pub fn builtin(name: &str) -> Option<&'static RelationTable> {
    SignatureEnv::standard().get(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_env_contents() {
        let env = SignatureEnv::standard();
        assert_eq!(env.len(), ORDER_RELATIONS.len() + BUILTIN_DEFINITIONS.len());
        assert_eq!(builtin("Betw").unwrap().len(), 2);
        assert_eq!(builtin("Cycl").unwrap().len(), 6);
        assert_eq!(builtin("Par").unwrap().len(), 3);
        assert_eq!(builtin("Low").unwrap().len(), 2);
        assert_eq!(builtin("Sep").unwrap().arity(), 4);
    }

    #[test]
    fn duplicates_are_rejected() {
        let mut env = SignatureEnv::order_only();
        let err = env.insert(order_relation("<").unwrap()).unwrap_err();
        assert!(matches!(err, FormulaError::DuplicateRelation { .. }));
    }

    #[test]
    fn restriction() {
        let env = SignatureEnv::standard().restricted(&["<", "Cycl"]).unwrap();
        assert_eq!(env.len(), 2);
        assert!(SignatureEnv::standard().restricted(&["Nope"]).is_err());
    }
}
