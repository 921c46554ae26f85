//! Search over pair assignments. Every unordered variable pair carries a
//! domain of candidate [`PairRelation`]s; propagation is path consistency via
//! the derived composition table plus, for each constraint, projection of its
//! still-compatible table rows onto the pairs it covers.

use std::sync::Arc;

use crate::poset::{composition_table, KType, PairRelation, RelSet};
use crate::table::RelationTable;

#[inline]
fn cell(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

const fn dual_bits(b: u8) -> u8 {
    // EQ and INC are fixed, LT and GT swap
    (b & 0b1001) | ((b & 0b0010) << 1) | ((b & 0b0100) >> 1)
}

#[inline]
fn dual(s: RelSet) -> RelSet {
    RelSet::from_bits(dual_bits(s.bits()))
}

/// A constraint compiled against the problem's pair cells.
#[derive(Clone, Debug)]
struct Compiled {
    table: Arc<RelationTable>,
    args: Vec<usize>,
    /// Distinct variable pairs covered, as cell indices.
    cells: Vec<usize>,
    /// One row per surviving table type: the relation it forces on each cell.
    rows: Vec<Vec<PairRelation>>,
}

/// A finite constraint network over `n` variables.
#[derive(Clone, Debug)]
pub struct Problem {
    n: usize,
    domains: Vec<RelSet>,
    cell_pairs: Vec<(usize, usize)>,
    constraints: Vec<Compiled>,
    inconsistent: bool,
}

impl Problem {
    pub fn new(n: usize) -> Self {
        let mut cell_pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                cell_pairs.push((i, j));
            }
        }
        Problem {
            n,
            domains: vec![RelSet::FULL; cell_pairs.len()],
            cell_pairs,
            constraints: Vec::new(),
            inconsistent: false,
        }
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    /// Intersects the domain of the pair `(i, j)` with `allowed`.
    pub fn restrict(&mut self, i: usize, j: usize, allowed: RelSet) {
        if i == j {
            if !allowed.contains(PairRelation::Eq) {
                self.inconsistent = true;
            }
            return;
        }
        let (c, s) = if i < j {
            (cell(self.n, i, j), allowed)
        } else {
            (cell(self.n, j, i), dual(allowed))
        };
        self.domains[c] = self.domains[c].intersection(s);
        if self.domains[c].is_empty() {
            self.inconsistent = true;
        }
    }

    /// Adds the constraint `table(args)`. Constraints touching a single
    /// variable pair are folded into that pair's domain.
    pub fn add_table(&mut self, table: Arc<RelationTable>, args: &[usize]) {
        debug_assert_eq!(table.arity(), args.len());
        let k = args.len();
        let mut cells: Vec<usize> = Vec::new();
        // (position a, position b, cell, flipped)
        let mut slots = Vec::new();
        let mut forced_eq = Vec::new();
        for a in 0..k {
            for b in (a + 1)..k {
                let (u, w) = (args[a], args[b]);
                if u == w {
                    forced_eq.push((a, b));
                    continue;
                }
                let c = cell(self.n, u.min(w), u.max(w));
                let slot = match cells.iter().position(|&x| x == c) {
                    Some(s) => s,
                    None => {
                        cells.push(c);
                        cells.len() - 1
                    }
                };
                slots.push((a, b, slot, u > w));
            }
        }
        let mut rows = Vec::new();
        'types: for t in table.iter() {
            if forced_eq.iter().any(|&(a, b)| t.rel(a, b) != PairRelation::Eq) {
                continue;
            }
            let mut row: Vec<Option<PairRelation>> = vec![None; cells.len()];
            for &(a, b, slot, flipped) in &slots {
                let r = if flipped { t.rel(b, a) } else { t.rel(a, b) };
                match row[slot] {
                    Some(prev) if prev != r => continue 'types,
                    _ => row[slot] = Some(r),
                }
            }
            rows.push(row.into_iter().map(Option::unwrap).collect::<Vec<_>>());
        }
        rows.sort();
        rows.dedup();
        match cells.len() {
            0 => {
                if rows.is_empty() {
                    self.inconsistent = true;
                }
            }
            1 => {
                let allowed: RelSet = rows.iter().map(|r| r[0]).collect();
                let c = cells[0];
                self.domains[c] = self.domains[c].intersection(allowed);
                if self.domains[c].is_empty() {
                    self.inconsistent = true;
                }
            }
            _ => {
                if rows.is_empty() {
                    self.inconsistent = true;
                }
                self.constraints.push(Compiled {
                    table,
                    args: args.to_vec(),
                    cells,
                    rows,
                })
            }
        }
    }

    /// Finds a satisfying type over all variables, if one exists.
    pub fn solve(&self) -> Option<KType> {
        if self.inconsistent {
            return None;
        }
        if self.n < 2 {
            return Some(KType::diagonal(self.n));
        }
        let mut stats = SearchStats::default();
        self.search(self.domains.clone(), &mut stats)
    }

    /// Like [`Problem::solve`], also reporting how many nodes were expanded.
    pub fn solve_with_stats(&self) -> (Option<KType>, SearchStats) {
        let mut stats = SearchStats::default();
        if self.inconsistent {
            return (None, stats);
        }
        if self.n < 2 {
            return (Some(KType::diagonal(self.n)), stats);
        }
        let r = self.search(self.domains.clone(), &mut stats);
        (r, stats)
    }

    fn get(&self, d: &[RelSet], i: usize, j: usize) -> RelSet {
        if i < j {
            d[cell(self.n, i, j)]
        } else {
            dual(d[cell(self.n, j, i)])
        }
    }

    /// Narrows `(i, j)` to `s`; returns whether the domain changed.
    fn narrow(&self, d: &mut [RelSet], i: usize, j: usize, s: RelSet) -> bool {
        let (c, s) = if i < j {
            (cell(self.n, i, j), s)
        } else {
            (cell(self.n, j, i), dual(s))
        };
        let next = d[c].intersection(s);
        if next != d[c] {
            d[c] = next;
            true
        } else {
            false
        }
    }

    /// Runs propagation to a fixpoint. Returns `false` on a wipe-out.
    fn propagate(&self, d: &mut [RelSet]) -> bool {
        let comp = composition_table();
        let n = self.n;
        loop {
            let mut changed = false;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let dij = self.get(d, i, j);
                    for k in 0..n {
                        if k == i || k == j {
                            continue;
                        }
                        let bound = comp.compose_sets(dij, self.get(d, j, k));
                        if self.narrow(d, i, k, bound) {
                            changed = true;
                            if self.get(d, i, k).is_empty() {
                                return false;
                            }
                        }
                    }
                }
            }
            for c in &self.constraints {
                let mut support = vec![RelSet::EMPTY; c.cells.len()];
                let mut any = false;
                for row in &c.rows {
                    if row.iter().zip(&c.cells).all(|(&r, &cell)| d[cell].contains(r)) {
                        any = true;
                        for (s, &r) in support.iter_mut().zip(row) {
                            *s = s.with(r);
                        }
                    }
                }
                if !any {
                    return false;
                }
                for (s, &cell) in support.iter().zip(&c.cells) {
                    let next = d[cell].intersection(*s);
                    if next != d[cell] {
                        d[cell] = next;
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&self, mut d: Vec<RelSet>, stats: &mut SearchStats) -> Option<KType> {
        stats.nodes += 1;
        if !self.propagate(&mut d) {
            return None;
        }
        // lexicographically least pair among those with fewest candidates
        let branch = d
            .iter()
            .enumerate()
            .filter(|(_, s)| s.len() > 1)
            .min_by_key(|&(c, s)| (s.len(), c))
            .map(|(c, _)| c);
        match branch {
            None => self.leaf(&d),
            Some(c) => {
                for r in d[c].iter() {
                    let mut next = d.clone();
                    next[c] = RelSet::single(r);
                    if let Some(t) = self.search(next, stats) {
                        return Some(t);
                    }
                }
                None
            }
        }
    }

    fn leaf(&self, d: &[RelSet]) -> Option<KType> {
        let cells = d
            .iter()
            .map(|s| s.as_single().expect("leaf domains are singletons"))
            .collect();
        let t = KType::from_cells(self.n, cells).ok()?;
        let ok = self
            .constraints
            .iter()
            .all(|c| c.table.contains(&t.project(&c.args)));
        ok.then_some(t)
    }

    /// The pair `(i, j)` of every cell, in cell order.
    pub fn cell_pairs(&self) -> &[(usize, usize)] {
        &self.cell_pairs
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::builtin;
    use PairRelation::*;

    fn lt() -> Arc<RelationTable> {
        Arc::new(builtin("<").unwrap().clone())
    }

    #[test]
    fn dual_bits_swap_lt_gt() {
        assert_eq!(dual(RelSet::of(&[Lt, Inc])), RelSet::of(&[Gt, Inc]));
        assert_eq!(dual(RelSet::FULL), RelSet::FULL);
    }

    #[test]
    fn cycle_is_unsat() {
        let mut p = Problem::new(3);
        p.add_table(lt(), &[0, 1]);
        p.add_table(lt(), &[1, 2]);
        p.add_table(lt(), &[2, 0]);
        assert!(p.solve().is_none());
    }

    #[test]
    fn chain_is_forced() {
        let mut p = Problem::new(3);
        p.add_table(lt(), &[0, 1]);
        p.add_table(lt(), &[1, 2]);
        let t = p.solve().unwrap();
        assert_eq!(t.rel(0, 2), Lt);
    }

    #[test]
    fn repeated_arguments() {
        // Betw(x,y,x) is never satisfied
        let betw = Arc::new(builtin("Betw").unwrap().clone());
        let mut p = Problem::new(2);
        p.add_table(betw, &[0, 1, 0]);
        assert!(p.solve().is_none());

        let mut q = Problem::new(1);
        q.add_table(lt(), &[0, 0]);
        assert!(q.solve().is_none());
    }

    #[test]
    fn first_candidate_order_is_eq() {
        let p = Problem::new(2);
        assert_eq!(p.solve().unwrap(), KType::pair(Eq));
    }
}
