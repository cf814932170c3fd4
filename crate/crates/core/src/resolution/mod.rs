//! Clauses, CNFs and treelike resolution: proof checking, clause space,
//! bounded-space proof search and proof restriction.

mod clause;
mod proof;
mod search;

pub use clause::{Clause, Cnf, Literal};
pub use proof::{check_proof, restrict_proof, space_bound_for_size, Proof};
pub use search::search_space;
