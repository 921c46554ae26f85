use std::sync::OnceLock;

use super::enumerate::enumerate_ktypes;
use super::relation::{PairRelation, RelSet};

/// Point-algebra composition for the poset variant, derived from the 3-types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionTable {
    single: [[RelSet; 4]; 4],
    sets: Vec<RelSet>,
}

impl CompositionTable {
    fn derive() -> Self {
        let mut single = [[RelSet::EMPTY; 4]; 4];
        for t in enumerate_ktypes(3).expect("arity 3 is enumerable") {
            let (r1, r2, r3) = (t.rel(0, 1), t.rel(1, 2), t.rel(0, 2));
            let cell = &mut single[r1.index()][r2.index()];
            *cell = cell.with(r3);
        }
        let mut sets = vec![RelSet::EMPTY; 256];
        for a in 0..16u8 {
            for b in 0..16u8 {
                let mut out = RelSet::EMPTY;
                for r1 in RelSet::from_bits(a).iter() {
                    for r2 in RelSet::from_bits(b).iter() {
                        out = out.union(single[r1.index()][r2.index()]);
                    }
                }
                sets[(a as usize) << 4 | b as usize] = out;
            }
        }
        CompositionTable { single, sets }
    }

    /// `{ r3 : x r1 y, y r2 z, x r3 z is consistent }`.
    pub fn compose(&self, r1: PairRelation, r2: PairRelation) -> RelSet {
        self.single[r1.index()][r2.index()]
    }

    /// Union of `compose` over both sets.
    #[inline]
    pub fn compose_sets(&self, a: RelSet, b: RelSet) -> RelSet {
        self.sets[(a.bits() as usize) << 4 | b.bits() as usize]
    }
}

pub fn composition_table() -> &'static CompositionTable {
    static TABLE: OnceLock<CompositionTable> = OnceLock::new();
    TABLE.get_or_init(CompositionTable::derive)
}
