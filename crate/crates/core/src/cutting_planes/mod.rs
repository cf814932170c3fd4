//! Integer linear inequalities over Boolean variables, the cutting-planes
//! rules, and the sparse, norm-bounded decision procedure.

mod decide;
mod ineq;

pub use decide::{check_cp_trace, decide_cp, CpOutcome, CpStep, CpTrace};
pub use ineq::{
    apply_rule, encode_clause_cp, restrict_ineq, CpAxiom, CpRule, LinIneq, RestrictedIneq,
};
