use std::fmt;

use super::ktype::KType;
use super::relation::PairRelation;
use super::PosetError;

use PairRelation::{Eq, Gt, Inc, Lt};

/// The action of a canonical binary operation on pairs of 2-types.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryBehaviour {
    name: String,
    table: [[PairRelation; 4]; 4],
}

impl BinaryBehaviour {
    /// Rows are indexed by the left argument's relation, columns by the
    /// right's, both in `EQ, LT, GT, INC` order.
    pub fn new(name: impl Into<String>, table: [[PairRelation; 4]; 4]) -> Result<Self, PosetError> {
        let name = name.into();
        for p in PairRelation::ALL {
            for q in PairRelation::ALL {
                let out = table[p.index()][q.index()];
                let diagonal = p == Eq && q == Eq;
                if (out == Eq) != diagonal {
                    return Err(PosetError::NotInjective {
                        behaviour: name,
                        left: p,
                        right: q,
                    });
                }
            }
        }
        Ok(BinaryBehaviour { name, table })
    }

    /// Embedding of `(P;<)²` into `(P;<)`.
    pub fn e_lt() -> Self {
        BinaryBehaviour::new(
            "e_lt",
            [
                [Eq, Inc, Inc, Inc],
                [Inc, Lt, Inc, Inc],
                [Inc, Inc, Gt, Inc],
                [Inc, Inc, Inc, Inc],
            ],
        )
        .expect("builtin table")
    }

    /// Embedding of `(P;≤)²` into `(P;≤)`.
    pub fn e_leq() -> Self {
        BinaryBehaviour::new(
            "e_leq",
            [
                [Eq, Lt, Gt, Inc],
                [Lt, Lt, Inc, Inc],
                [Gt, Inc, Gt, Inc],
                [Inc, Inc, Inc, Inc],
            ],
        )
        .expect("builtin table")
    }

    /// Injective map onto an antichain.
    pub fn injection() -> Self {
        let mut table = [[Inc; 4]; 4];
        table[0][0] = Eq;
        BinaryBehaviour::new("injection", table).expect("builtin table")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, p: PairRelation, q: PairRelation) -> PairRelation {
        self.table[p.index()][q.index()]
    }

    pub fn is_symmetric(&self) -> bool {
        PairRelation::ALL
            .iter()
            .all(|&p| PairRelation::ALL.iter().all(|&q| self.apply(p, q) == self.apply(q, p)))
    }

    /// Entrywise application to two types of the same arity.
    pub fn image(&self, s: &KType, t: &KType) -> Result<KType, PosetError> {
        if s.arity() != t.arity() {
            return Err(PosetError::ArityMismatch {
                left: s.arity(),
                right: t.arity(),
            });
        }
        let cells = s
            .cells()
            .iter()
            .zip(t.cells())
            .map(|(&p, &q)| self.apply(p, q))
            .collect();
        KType::from_cells(s.arity(), cells).map_err(|source| PosetError::InvalidImage {
            behaviour: self.name.clone(),
            source: Box::new(source),
        })
    }
}

/// Convenience form of [`BinaryBehaviour::image`].
pub fn binary_image(b: &BinaryBehaviour, s: &KType, t: &KType) -> Result<KType, PosetError> {
    b.image(s, t)
}

impl fmt::Debug for BinaryBehaviour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryBehaviour({})", self.name)
    }
}

impl fmt::Display for BinaryBehaviour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>9} | =  <  >  #", self.name)?;
        for p in PairRelation::ALL {
            write!(f, "{:>9} |", p.symbol())?;
            for q in PairRelation::ALL {
                write!(f, " {} ", self.apply(p, q))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_tables_are_symmetric() {
        assert!(BinaryBehaviour::e_lt().is_symmetric());
        assert!(BinaryBehaviour::e_leq().is_symmetric());
        assert!(BinaryBehaviour::injection().is_symmetric());
    }

    #[test]
    fn table_lookups() {
        assert_eq!(BinaryBehaviour::e_lt().apply(Lt, Lt), Lt);
        assert_eq!(BinaryBehaviour::e_leq().apply(Eq, Lt), Lt);
        assert_eq!(BinaryBehaviour::e_lt().apply(Eq, Lt), Inc);
    }

    #[test]
    fn non_injective_table_is_rejected() {
        let mut table = [[Inc; 4]; 4];
        table[0][0] = Eq;
        table[1][1] = Eq;
        assert!(matches!(
            BinaryBehaviour::new("bad", table),
            Err(PosetError::NotInjective { left: Lt, right: Lt, .. })
        ));
    }

    #[test]
    fn e_lt_on_chain_and_rotated_chain() {
        let s = KType::chain(3);
        // z<x<y
        let t = KType::from_cells(3, vec![Lt, Gt, Gt]).unwrap();
        let img = BinaryBehaviour::e_lt().image(&s, &t).unwrap();
        assert_eq!(img, KType::from_cells(3, vec![Lt, Inc, Inc]).unwrap());
    }

    #[test]
    fn arity_mismatch() {
        assert!(matches!(
            BinaryBehaviour::e_lt().image(&KType::chain(2), &KType::chain(3)),
            Err(PosetError::ArityMismatch { left: 2, right: 3 })
        ));
    }
}
