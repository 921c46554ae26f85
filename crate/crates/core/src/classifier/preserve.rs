use std::fmt;

use crate::poset::{binary_image, unary_images, BinaryBehaviour, KType, UnaryFamily};
use crate::table::RelationTable;

/// Members of a relation whose image under a behaviour leaves it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterExample {
    pub inputs: Vec<KType>,
    pub image: KType,
}

impl fmt::Display for CounterExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.inputs.iter().enumerate() {
            if i > 0 {
                f.write_str(" , ")?;
            }
            write!(f, "[{t}]")?;
        }
        write!(f, " -> [{}]", self.image)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preservation {
    Holds,
    Violated(CounterExample),
}

impl Preservation {
    pub fn holds(&self) -> bool {
        matches!(self, Preservation::Holds)
    }

    pub fn counterexample(&self) -> Option<&CounterExample> {
        match self {
            Preservation::Holds => None,
            Preservation::Violated(c) => Some(c),
        }
    }
}

/// Is every image of every member under `family` again a member?
pub fn preserved_unary(table: &RelationTable, family: UnaryFamily) -> Preservation {
    for t in table.iter() {
        if let Some(img) = unary_images(t, family).into_iter().find(|i| !table.contains(i)) {
            return Preservation::Violated(CounterExample {
                inputs: vec![t.clone()],
                image: img,
            });
        }
    }
    Preservation::Holds
}

/// Is the relation closed under the entrywise action of `b`?
pub fn preserved_binary(table: &RelationTable, b: &BinaryBehaviour) -> Preservation {
    for s in table.iter() {
        for t in table.iter() {
            let img = binary_image(b, s, t).expect("injective behaviours give valid images");
            if !table.contains(&img) {
                return Preservation::Violated(CounterExample {
                    inputs: vec![s.clone(), t.clone()],
                    image: img,
                });
            }
        }
    }
    Preservation::Holds
}
