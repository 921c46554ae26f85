use std::sync::OnceLock;

use super::ktype::KType;
use super::relation::PairRelation;
use super::PosetError;

/// Largest arity for which all types are enumerated.
pub const MAX_ENUM_ARITY: usize = 6;

static CACHE: [OnceLock<Vec<KType>>; MAX_ENUM_ARITY + 1] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// All quantifier-free types of arity `k`, sorted, without duplicates.
pub fn enumerate_ktypes(k: usize) -> Result<&'static [KType], PosetError> {
    if k == 0 {
        return Err(PosetError::ArityZero);
    }
    if k > MAX_ENUM_ARITY {
        return Err(PosetError::ArityTooLarge {
            arity: k,
            max: MAX_ENUM_ARITY,
        });
    }
    Ok(types_cached(k))
}

fn types_cached(k: usize) -> &'static [KType] {
    CACHE[k].get_or_init(|| {
        if k == 1 {
            return vec![KType::diagonal(1)];
        }
        let mut out: Vec<KType> = types_cached(k - 1).iter().flat_map(extensions).collect();
        out.sort();
        out
    })
}

/// Every valid type of arity `k+1` whose restriction to the first `k`
/// positions is `parent`.
fn extensions(parent: &KType) -> Vec<KType> {
    let k = parent.arity();
    let reps = parent.class_representatives();
    let classes: Vec<usize> = (0..k).filter(|&i| reps[i] == i).collect();
    let mut out = Vec::new();

    // new position equal to an existing class
    for &c in &classes {
        out.push(push_column(parent, |i| parent.rel(i, c)));
    }

    // new position in a class of its own
    let options = [PairRelation::Lt, PairRelation::Gt, PairRelation::Inc];
    let mut choice = vec![0usize; classes.len()];
    loop {
        let col = |i: usize| {
            let ci = classes.iter().position(|&c| c == reps[i]).unwrap();
            options[choice[ci]]
        };
        let cand = push_column(parent, col);
        if cand.is_valid() {
            out.push(cand);
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return out;
            }
            choice[pos] += 1;
            if choice[pos] < options.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Appends a position whose relation to position `i` is `col(i)`.
fn push_column(parent: &KType, col: impl Fn(usize) -> PairRelation) -> KType {
    let k = parent.arity();
    let mut cells = Vec::with_capacity((k + 1) * k / 2);
    for i in 0..=k {
        for j in (i + 1)..=k {
            if j == k {
                cells.push(col(i));
            } else {
                cells.push(parent.rel(i, j));
            }
        }
    }
    KType::from_cells_unchecked(k + 1, cells)
}
