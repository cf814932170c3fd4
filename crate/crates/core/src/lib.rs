//! Deciding `(1 - eps)`-validity of propositional queries from a knowledge
//! base and a sample of partially masked examples.
//!
//! Each masked example restricts the query and the knowledge base; a
//! bounded proof search (treelike resolution in bounded space, bounded-width
//! RES(k), bounded-degree polynomial calculus, sparse bounded cutting planes)
//! then runs on the restricted instance, and the query is accepted when the
//! number of failed searches stays within `floor(eps * m)`.

pub mod cutting_planes;
pub mod error;
pub mod formats;
pub mod formula;
pub mod oracle;
pub mod pac;
pub mod polycalc;
pub mod resk;
pub mod scenario;
pub mod resolution;
pub mod sampling;

pub use error::{Error, Result};
