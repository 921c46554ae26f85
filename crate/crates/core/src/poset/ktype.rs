use std::fmt;

use super::relation::PairRelation;
use super::PosetError;

/// A finite partial order given by its `≤` table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    size: usize,
    leq: Vec<bool>,
}

impl FinitePoset {
    /// Checks reflexivity, antisymmetry and transitivity (in that order) and
    /// reports the first witness of a violation.
    pub fn validate(table: &[Vec<bool>]) -> Result<FinitePoset, PosetError> {
        let n = table.len();
        if let Some(row) = table.iter().position(|r| r.len() != n) {
            return Err(PosetError::NotSquare { row, expected: n });
        }
        let at = |i: usize, j: usize| table[i][j];
        for i in 0..n {
            if !at(i, i) {
                return Err(PosetError::Reflexivity { i });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if at(i, j) && at(j, i) {
                    return Err(PosetError::Antisymmetry { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !at(i, j) {
                    continue;
                }
                for k in 0..n {
                    if at(j, k) && !at(i, k) {
                        return Err(PosetError::Transitivity { i, j, k });
                    }
                }
            }
        }
        Ok(FinitePoset {
            size: n,
            leq: table.iter().flatten().copied().collect(),
        })
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> FinitePoset {
        let table: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        FinitePoset::validate(&table).expect("a chain is a partial order")
    }

    /// `n` pairwise incomparable elements.
    pub fn antichain(n: usize) -> FinitePoset {
        let table: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        FinitePoset::validate(&table).expect("an antichain is a partial order")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.size + j]
    }

    /// The quantifier-free type induced on the given (possibly repeated) elements.
    pub fn ktype_of(&self, indices: &[usize]) -> Result<KType, PosetError> {
        if let Some(&index) = indices.iter().find(|&&i| i >= self.size) {
            return Err(PosetError::IndexOutOfRange {
                index,
                size: self.size,
            });
        }
        let t = KType::from_fn(indices.len(), |a, b| {
            let (i, j) = (indices[a], indices[b]);
            match (self.leq(i, j), self.leq(j, i)) {
                _ if i == j => PairRelation::Eq,
                (true, _) => PairRelation::Lt,
                (_, true) => PairRelation::Gt,
                _ => PairRelation::Inc,
            }
        })
        .expect("types induced by a poset are valid");
        Ok(t)
    }
}

/// A quantifier-free type of a k-tuple: the relation between every pair of
/// positions. Only the strict upper triangle is stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KType {
    arity: usize,
    cells: Vec<PairRelation>,
}

#[inline]
fn cell_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

impl KType {
    /// Builds a type from a function giving `rel(i, j)` for `i < j`, then validates it.
    pub fn from_fn(
        arity: usize,
        mut f: impl FnMut(usize, usize) -> PairRelation,
    ) -> Result<KType, PosetError> {
        let mut cells = Vec::with_capacity(arity * arity.saturating_sub(1) / 2);
        for i in 0..arity {
            for j in (i + 1)..arity {
                cells.push(f(i, j));
            }
        }
        let t = KType { arity, cells };
        t.check()?;
        Ok(t)
    }

    /// Upper-triangle cells in row-major order: (0,1), (0,2), …, (1,2), …
    pub fn from_cells(arity: usize, cells: Vec<PairRelation>) -> Result<KType, PosetError> {
        if cells.len() != arity * arity.saturating_sub(1) / 2 {
            return Err(PosetError::CellCount {
                arity,
                found: cells.len(),
            });
        }
        let t = KType { arity, cells };
        t.check()?;
        Ok(t)
    }

    pub(crate) fn from_cells_unchecked(arity: usize, cells: Vec<PairRelation>) -> KType {
        KType { arity, cells }
    }

    /// The 2-type with the given relation between position 0 and 1.
    pub fn pair(r: PairRelation) -> KType {
        KType {
            arity: 2,
            cells: vec![r],
        }
    }

    /// Every position equal to every other.
    pub fn diagonal(arity: usize) -> KType {
        KType {
            arity,
            cells: vec![PairRelation::Eq; arity * arity.saturating_sub(1) / 2],
        }
    }

    /// The chain `0 < 1 < … < k-1`.
    pub fn chain(arity: usize) -> KType {
        KType::from_fn(arity, |_, _| PairRelation::Lt).expect("chain type is valid")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cells(&self) -> &[PairRelation] {
        &self.cells
    }

    /// Relation of position `i` to position `j`.
    #[inline]
    pub fn rel(&self, i: usize, j: usize) -> PairRelation {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Equal => PairRelation::Eq,
            Ordering::Less => self.cells[cell_index(self.arity, i, j)],
            Ordering::Greater => self.cells[cell_index(self.arity, j, i)].dual(),
        }
    }

    fn check(&self) -> Result<(), PosetError> {
        let k = self.arity;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let rij = self.rel(i, j);
                for l in 0..k {
                    if l == i || l == j {
                        continue;
                    }
                    match rij {
                        PairRelation::Eq if self.rel(i, l) != self.rel(j, l) => {
                            return Err(PosetError::NotCongruent { i, j, l });
                        }
                        PairRelation::Lt
                            if self.rel(j, l) == PairRelation::Lt
                                && self.rel(i, l) != PairRelation::Lt =>
                        {
                            return Err(PosetError::NotTransitive { i, j, l });
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    /// For every position the smallest position equal to it.
    pub fn class_representatives(&self) -> Vec<usize> {
        (0..self.arity)
            .map(|i| {
                (0..i)
                    .find(|&j| self.rel(j, i) == PairRelation::Eq)
                    .unwrap_or(i)
            })
            .collect()
    }

    /// Equality classes as a vector of class ids (dense, first-occurrence
    /// order) plus the number of classes.
    pub fn class_ids(&self) -> (Vec<usize>, usize) {
        let reps = self.class_representatives();
        let mut ids = vec![usize::MAX; self.arity];
        let mut count = 0;
        for i in 0..self.arity {
            if reps[i] == i {
                ids[i] = count;
                count += 1;
            } else {
                ids[i] = ids[reps[i]];
            }
        }
        (ids, count)
    }

    /// The type of the tuple `(x_{idx[0]}, x_{idx[1]}, …)`; indices may repeat.
    pub fn project(&self, indices: &[usize]) -> KType {
        let m = indices.len();
        let mut cells = Vec::with_capacity(m * m.saturating_sub(1) / 2);
        for a in 0..m {
            for b in (a + 1)..m {
                cells.push(self.rel(indices[a], indices[b]));
            }
        }
        KType { arity: m, cells }
    }

    /// Order reversal: every `<` becomes `>`.
    pub fn reversed(&self) -> KType {
        KType {
            arity: self.arity,
            cells: self.cells.iter().map(|r| r.dual()).collect(),
        }
    }

    /// True when no pair is `#`.
    pub fn is_total(&self) -> bool {
        self.cells.iter().all(|&r| r != PairRelation::Inc)
    }

    /// True when every pair is `=` or `#`.
    pub fn is_order_free(&self) -> bool {
        self.cells
            .iter()
            .all(|&r| matches!(r, PairRelation::Eq | PairRelation::Inc))
    }
}

impl fmt::Debug for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KType[{}]({})", self.arity, self)
    }
}

/// Pairs are written 1-based, e.g. `1<2 1#3 2=3`.
impl fmt::Display for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cells.is_empty() {
            return write!(f, "-");
        }
        let mut first = true;
        for i in 0..self.arity {
            for j in (i + 1)..self.arity {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{}{}{}", i + 1, self.rel(i, j), j + 1)?;
            }
        }
        Ok(())
    }
}
