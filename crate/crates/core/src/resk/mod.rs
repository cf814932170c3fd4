//! k-DNF formulas and the bounded-width RES(k) decision procedure.

mod decide;
mod kdnf;
mod trace;

pub use decide::{decide_resk_width, ResKOutcome};
pub use kdnf::{negate_query, restrict_kdnf, KDnf, Term};
pub use trace::{check_resk_trace, ResKStep, ResKTrace};
