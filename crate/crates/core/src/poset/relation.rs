use std::fmt;

/// One of the four 2-types of the random poset.
///
/// The declaration order (`Eq < Lt < Gt < Inc`) is the canonical order used
/// for sorting types and for trying candidates during search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairRelation {
    Eq,
    Lt,
    Gt,
    Inc,
}

impl PairRelation {
    pub const ALL: [PairRelation; 4] = [
        PairRelation::Eq,
        PairRelation::Lt,
        PairRelation::Gt,
        PairRelation::Inc,
    ];

    /// The relation seen from the other side of the pair.
    pub fn dual(self) -> Self {
        match self {
            PairRelation::Eq => PairRelation::Eq,
            PairRelation::Lt => PairRelation::Gt,
            PairRelation::Gt => PairRelation::Lt,
            PairRelation::Inc => PairRelation::Inc,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    pub fn symbol(self) -> &'static str {
        match self {
            PairRelation::Eq => "=",
            PairRelation::Lt => "<",
            PairRelation::Gt => ">",
            PairRelation::Inc => "#",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PairRelation::Eq => "EQ",
            PairRelation::Lt => "LT",
            PairRelation::Gt => "GT",
            PairRelation::Inc => "INC",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.symbol() == s)
    }
}

impl fmt::Display for PairRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A subset of [`PairRelation`], stored as a 4-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RelSet(u8);

impl RelSet {
    pub const EMPTY: RelSet = RelSet(0);
    pub const FULL: RelSet = RelSet(0b1111);

    pub fn from_bits(bits: u8) -> Self {
        RelSet(bits & 0b1111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn single(r: PairRelation) -> Self {
        RelSet(1 << r.index())
    }

    pub fn of(rels: &[PairRelation]) -> Self {
        rels.iter().fold(RelSet::EMPTY, |s, &r| s.with(r))
    }

    pub fn with(self, r: PairRelation) -> Self {
        RelSet(self.0 | (1 << r.index()))
    }

    pub fn contains(self, r: PairRelation) -> bool {
        self.0 & (1 << r.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: RelSet) -> Self {
        RelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: RelSet) -> Self {
        RelSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: RelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn dual(self) -> Self {
        self.iter().fold(RelSet::EMPTY, |s, r| s.with(r.dual()))
    }

    /// The unique member, if the set is a singleton.
    pub fn as_single(self) -> Option<PairRelation> {
        if self.len() == 1 {
            Some(PairRelation::from_index(self.0.trailing_zeros() as usize))
        } else {
            None
        }
    }

    pub fn iter(self) -> impl Iterator<Item = PairRelation> {
        PairRelation::ALL.into_iter().filter(move |&r| self.contains(r))
    }
}

impl FromIterator<PairRelation> for RelSet {
    fn from_iter<I: IntoIterator<Item = PairRelation>>(iter: I) -> Self {
        iter.into_iter().fold(RelSet::EMPTY, |s, r| s.with(r))
    }
}

impl fmt::Debug for RelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, r) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(r.name())?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for RelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
