//! Multilinear polynomials over the rationals and the degree-bounded
//! polynomial calculus (optionally with dual indeterminates) decision
//! procedure.

mod decide;
mod poly;

pub use decide::{
    complementarity, decide_pc, gaussian_reduce, indeterminates, pc_basis, PcBasis, PcMode,
};
pub use poly::{
    encode_clause_pcr, multilinearize, poly_witness_status, polynomial_formula,
    restrict_polynomial, Indeterminate, Monomial, Polynomial,
};
