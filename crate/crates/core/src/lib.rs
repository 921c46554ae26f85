//! Constraint satisfaction over the random partial order: types, formulas,
//! a complete solver, the Horn fragments, the complexity classifier and
//! executable hardness gadgets.

pub mod classifier;
pub mod formula;
pub mod gadgets;
pub mod horn;
pub mod poset;
pub mod solver;
pub mod table;
