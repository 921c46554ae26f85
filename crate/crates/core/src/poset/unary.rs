//! Images of types under the unary behaviours used by the monoid
//! pre-classification. Collapse families are nondeterministic: they return
//! every image a map of that kind could produce on the given type.

use std::collections::BTreeSet;
use std::fmt;

use super::ktype::KType;
use super::relation::PairRelation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnaryFamily {
    /// Maps everything to one point.
    Constant,
    /// Turns the order upside down.
    Reverse,
    /// Onto an antichain, preserving only incomparability.
    FlattenCollapse,
    /// Onto a chain, preserving only the strict order.
    ChainCollapse,
    /// Rotation around an upward-closed set.
    Rotate,
}

impl UnaryFamily {
    pub const ALL: [UnaryFamily; 5] = [
        UnaryFamily::Constant,
        UnaryFamily::Reverse,
        UnaryFamily::FlattenCollapse,
        UnaryFamily::ChainCollapse,
        UnaryFamily::Rotate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UnaryFamily::Constant => "constant",
            UnaryFamily::Reverse => "reverse",
            UnaryFamily::FlattenCollapse => "flatten_collapse",
            UnaryFamily::ChainCollapse => "chain_collapse",
            UnaryFamily::Rotate => "rotate",
        }
    }
}

impl fmt::Display for UnaryFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Equality classes of a type together with the relation between classes.
struct Quotient {
    ids: Vec<usize>,
    count: usize,
    rel: Vec<PairRelation>,
}

impl Quotient {
    fn of(t: &KType) -> Quotient {
        let (ids, count) = t.class_ids();
        let mut reps = vec![0; count];
        for (i, &c) in ids.iter().enumerate().rev() {
            reps[c] = i;
        }
        let mut rel = vec![PairRelation::Eq; count * count];
        for a in 0..count {
            for b in 0..count {
                rel[a * count + b] = t.rel(reps[a], reps[b]);
            }
        }
        Quotient { ids, count, rel }
    }

    fn rel(&self, a: usize, b: usize) -> PairRelation {
        self.rel[a * self.count + b]
    }

    /// Lifts a relation between classes back to the positions of the type.
    fn lift(&self, f: impl Fn(usize, usize) -> PairRelation) -> KType {
        let ids = &self.ids;
        KType::from_fn(ids.len(), |i, j| {
            if ids[i] == ids[j] {
                PairRelation::Eq
            } else {
                f(ids[i], ids[j])
            }
        })
        .expect("unary image must be a valid type")
    }
}

/// All images of `t` under maps of the given kind.
pub fn unary_images(t: &KType, family: UnaryFamily) -> BTreeSet<KType> {
    let mut out = BTreeSet::new();
    match family {
        UnaryFamily::Constant => {
            out.insert(KType::diagonal(t.arity()));
        }
        UnaryFamily::Reverse => {
            out.insert(t.reversed());
        }
        UnaryFamily::FlattenCollapse => {
            let q = Quotient::of(t);
            for_each_partition(q.count, &mut |block: &[usize]| {
                let merges_incomparable = (0..q.count).any(|a| {
                    (a + 1..q.count).any(|b| block[a] == block[b] && q.rel(a, b) == PairRelation::Inc)
                });
                if !merges_incomparable {
                    out.insert(q.lift(|a, b| {
                        if block[a] == block[b] {
                            PairRelation::Eq
                        } else {
                            PairRelation::Inc
                        }
                    }));
                }
            });
        }
        UnaryFamily::ChainCollapse => {
            let q = Quotient::of(t);
            let mut rank = vec![0usize; q.count];
            for_each_function(q.count, q.count, &mut rank, 0, &mut |rank: &[usize]| {
                let extends = (0..q.count).all(|a| {
                    (0..q.count).all(|b| q.rel(a, b) != PairRelation::Lt || rank[a] < rank[b])
                });
                if extends {
                    out.insert(q.lift(|a, b| match rank[a].cmp(&rank[b]) {
                        std::cmp::Ordering::Less => PairRelation::Lt,
                        std::cmp::Ordering::Greater => PairRelation::Gt,
                        std::cmp::Ordering::Equal => PairRelation::Eq,
                    }));
                }
            });
        }
        UnaryFamily::Rotate => {
            let q = Quotient::of(t);
            for upper in 0u32..(1u32 << q.count) {
                let inside = |a: usize| upper & (1 << a) != 0;
                let closed = (0..q.count).all(|a| {
                    !inside(a) || (0..q.count).all(|b| q.rel(a, b) != PairRelation::Lt || inside(b))
                });
                if closed {
                    out.insert(rotate_with(&q, &inside));
                }
            }
        }
    }
    out
}

/// The rotation image for a given upward-closed set of classes.
fn rotate_with(q: &Quotient, inside: &dyn Fn(usize) -> bool) -> KType {
    q.lift(|a, b| {
        let r = q.rel(a, b);
        match (inside(a), inside(b)) {
            (false, true) => cross(r),
            (true, false) => cross(r.dual()).dual(),
            _ => r,
        }
    })
}

/// Relation of a lower-part element to an upper-part element after rotation:
/// comparable pairs come apart and incomparable ones put the upper part below.
fn cross(r: PairRelation) -> PairRelation {
    match r {
        PairRelation::Inc => PairRelation::Gt,
        PairRelation::Lt => PairRelation::Inc,
        other => unreachable!("upward-closed split has no {other:?} across it"),
    }
}

/// The rotation image for the upward-closed set given by positions of `t`.
/// Returns `None` when the set is not upward closed or splits a class.
pub fn rotate_at(t: &KType, upper_positions: &[usize]) -> Option<KType> {
    let q = Quotient::of(t);
    let mut mask = 0u32;
    for &p in upper_positions {
        mask |= 1 << q.ids[p];
    }
    let inside = |a: usize| mask & (1 << a) != 0;
    for i in 0..t.arity() {
        if inside(q.ids[i]) != upper_positions.contains(&i) {
            return None;
        }
    }
    let closed = (0..q.count)
        .all(|a| !inside(a) || (0..q.count).all(|b| q.rel(a, b) != PairRelation::Lt || inside(b)));
    closed.then(|| rotate_with(&q, &inside))
}

/// Calls `f` with a block assignment (restricted growth string) for every set
/// partition of `n` items.
fn for_each_partition(n: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(block: &mut Vec<usize>, n: usize, max: usize, f: &mut dyn FnMut(&[usize])) {
        if block.len() == n {
            f(block);
            return;
        }
        for b in 0..=max {
            block.push(b);
            go(block, n, max.max(b + 1), f);
            block.pop();
        }
    }
    let mut block = Vec::with_capacity(n);
    go(&mut block, n, 0, f);
}

fn for_each_function(
    n: usize,
    range: usize,
    buf: &mut [usize],
    pos: usize,
    f: &mut dyn FnMut(&[usize]),
) {
    if pos == n {
        f(buf);
        return;
    }
    for v in 0..range {
        buf[pos] = v;
        for_each_function(n, range, buf, pos + 1, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PairRelation::*;

    fn set(ts: &[KType]) -> BTreeSet<KType> {
        ts.iter().cloned().collect()
    }

    #[test]
    fn reverse_of_chain() {
        let chain = KType::chain(3);
        let rev = unary_images(&chain, UnaryFamily::Reverse);
        // z<y<x
        let expected = KType::from_cells(3, vec![Gt, Gt, Gt]).unwrap();
        assert_eq!(rev, set(&[expected]));
    }

    #[test]
    fn rotate_chain_around_top() {
        let chain = KType::chain(3);
        let img = rotate_at(&chain, &[2]).unwrap();
        // x<y, z incomparable to both
        assert_eq!(img, KType::from_cells(3, vec![Lt, Inc, Inc]).unwrap());
        assert!(unary_images(&chain, UnaryFamily::Rotate).contains(&img));
        assert!(rotate_at(&chain, &[1]).is_none());
    }

    #[test]
    fn rotate_sinks_incomparable_upper_part() {
        // x<y with z apart, rotated around {y}: y drops below z
        let t = KType::from_cells(3, vec![Lt, Inc, Inc]).unwrap();
        let img = rotate_at(&t, &[1]).unwrap();
        assert_eq!(img, KType::from_cells(3, vec![Inc, Inc, Lt]).unwrap());
    }

    #[test]
    fn rotate_images_of_four_types_are_valid() {
        for t in crate::poset::enumerate_ktypes(4).unwrap() {
            for img in unary_images(t, UnaryFamily::Rotate) {
                assert_eq!(img.arity(), 4);
            }
        }
    }

    #[test]
    fn rotate_trivial_splits_are_identity() {
        let t = KType::from_cells(3, vec![Lt, Inc, Inc]).unwrap();
        assert_eq!(rotate_at(&t, &[]).unwrap(), t);
        assert_eq!(rotate_at(&t, &[0, 1, 2]).unwrap(), t);
    }

    #[test]
    fn flatten_of_pair_types() {
        assert_eq!(
            unary_images(&KType::pair(Lt), UnaryFamily::FlattenCollapse),
            set(&[KType::pair(Inc), KType::pair(Eq)])
        );
        assert_eq!(
            unary_images(&KType::pair(Inc), UnaryFamily::FlattenCollapse),
            set(&[KType::pair(Inc)])
        );
    }

    #[test]
    fn chain_collapse_of_antichain_pair() {
        assert_eq!(
            unary_images(&KType::pair(Inc), UnaryFamily::ChainCollapse),
            set(&[KType::pair(Lt), KType::pair(Gt), KType::pair(Eq)])
        );
        assert_eq!(
            unary_images(&KType::pair(Lt), UnaryFamily::ChainCollapse),
            set(&[KType::pair(Lt)])
        );
    }

    #[test]
    fn constant_image_is_diagonal() {
        let t = KType::from_cells(3, vec![Lt, Inc, Inc]).unwrap();
        assert_eq!(unary_images(&t, UnaryFamily::Constant), set(&[KType::diagonal(3)]));
        assert_eq!(
            unary_images(&KType::diagonal(1), UnaryFamily::Constant),
            set(&[KType::diagonal(1)])
        );
    }

    #[test]
    fn images_keep_equalities() {
        let t = KType::from_cells(3, vec![Eq, Lt, Lt]).unwrap();
        for fam in UnaryFamily::ALL {
            for img in unary_images(&t, fam) {
                assert_eq!(img.rel(0, 1), Eq, "{fam} broke an equality");
            }
        }
    }
}
