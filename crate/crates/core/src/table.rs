//! Relations over the random poset, represented as finite unions of orbits.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::poset::{enumerate_ktypes, KType, PairRelation, PosetError, RelSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("relation {name}: type of arity {found} in a table of arity {expected}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("relation {name}: invalid type: {source}")]
    InvalidType { name: String, source: PosetError },
    #[error("relation {name}: {source}")]
    Enumeration { name: String, source: PosetError },
    #[error("relation {name}: {perm:?} is not a permutation of its {arity} positions")]
    BadPermutation {
        name: String,
        arity: usize,
        perm: Vec<usize>,
    },
}

/// A named k-ary relation given as the set of k-types it contains.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RelationTable {
    name: String,
    arity: usize,
    types: BTreeSet<KType>,
}

impl RelationTable {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        types: impl IntoIterator<Item = KType>,
    ) -> Result<Self, TableError> {
        let name = name.into();
        let mut set = BTreeSet::new();
        for t in types {
            if t.arity() != arity {
                return Err(TableError::ArityMismatch {
                    name,
                    expected: arity,
                    found: t.arity(),
                });
            }
            if let Err(source) = KType::from_cells(t.arity(), t.cells().to_vec()) {
                return Err(TableError::InvalidType { name, source });
            }
            set.insert(t);
        }
        Ok(RelationTable {
            name,
            arity,
            types: set,
        })
    }

    /// A binary relation given by the pair relations it allows.
    pub fn binary(name: impl Into<String>, rels: RelSet) -> Self {
        RelationTable {
            name: name.into(),
            arity: 2,
            types: rels.iter().map(KType::pair).collect(),
        }
    }

    /// Every type of the given arity.
    pub fn full(name: impl Into<String>, arity: usize) -> Result<Self, TableError> {
        let name = name.into();
        match enumerate_ktypes(arity) {
            Ok(ts) => Ok(RelationTable {
                name,
                arity,
                types: ts.iter().cloned().collect(),
            }),
            Err(source) => Err(TableError::Enumeration { name, source }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn contains(&self, t: &KType) -> bool {
        self.types.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &KType> {
        self.types.iter()
    }

    pub fn types(&self) -> &BTreeSet<KType> {
        &self.types
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        RelationTable {
            name: name.into(),
            arity: self.arity,
            types: self.types.clone(),
        }
    }

    /// Contains the all-equal type.
    pub fn has_diagonal(&self) -> bool {
        self.types.contains(&KType::diagonal(self.arity))
    }

    /// The relation `R'(x_0, …, x_{k-1}) :⇔ R(x_{perm[0]}, …, x_{perm[k-1]})`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, TableError> {
        let k = self.arity;
        let mut inverse = vec![usize::MAX; k];
        if perm.len() != k {
            return Err(self.bad_perm(perm));
        }
        for (i, &p) in perm.iter().enumerate() {
            if p >= k || inverse[p] != usize::MAX {
                return Err(self.bad_perm(perm));
            }
            inverse[p] = i;
        }
        Ok(RelationTable {
            name: self.name.clone(),
            arity: k,
            types: self.types.iter().map(|t| t.project(&inverse)).collect(),
        })
    }

    fn bad_perm(&self, perm: &[usize]) -> TableError {
        TableError::BadPermutation {
            name: self.name.clone(),
            arity: self.arity,
            perm: perm.to_vec(),
        }
    }

    /// The sub-relation of types satisfying `keep`.
    pub fn filtered(&self, name: impl Into<String>, keep: impl Fn(&KType) -> bool) -> Self {
        RelationTable {
            name: name.into(),
            arity: self.arity,
            types: self.types.iter().filter(|t| keep(t)).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &RelationTable) -> bool {
        self.arity == other.arity && self.types.is_subset(&other.types)
    }

    /// For a binary table, the pair relations it contains.
    pub fn as_relset(&self) -> Option<RelSet> {
        (self.arity == 2).then(|| self.types.iter().map(|t| t.rel(0, 1)).collect())
    }
}

impl fmt::Debug for RelationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} {{", self.name, self.arity)?;
        for (i, t) in self.types.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

/// Standard names for the order comparisons viewed as binary relations.
pub fn order_relation(symbol: &str) -> Option<RelationTable> {
    use PairRelation::*;
    let rels = match symbol {
        "<" => RelSet::of(&[Lt]),
        "<=" => RelSet::of(&[Eq, Lt]),
        ">" => RelSet::of(&[Gt]),
        ">=" => RelSet::of(&[Eq, Gt]),
        "=" => RelSet::of(&[Eq]),
        "!=" => RelSet::of(&[Lt, Gt, Inc]),
        "#" => RelSet::of(&[Inc]),
        _ => return None,
    };
    Some(RelationTable::binary(symbol, rels))
}
