use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::One;

use crate::error::{Error, Result};
use crate::formula::{Rational, Var};

use super::poly::{Indeterminate, Monomial, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PcMode {
    /// Plain polynomial calculus over the variables.
    Pc,
    /// Adds a dual `~x` per variable with `x + ~x - 1 = 0`.
    Pcr,
}

/// Cancels leading monomials of `p` against `basis`, scanned in order.
/// `basis` must be sorted by decreasing leading monomial with distinct leads.
pub fn gaussian_reduce(p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let mut p = p.clone();
    for b in basis {
        let Some((pm, pc)) = p.lead() else { break };
        let (bm, bc) = b.lead().expect("basis elements are nonzero");
        if pm == bm {
            let factor = pc / bc;
            p = p.sub_scaled(&factor, b);
        }
    }
    p
}

/// Basis of the degree-bounded derivable space, keyed by leading monomial.
/// Elements are monic.
#[derive(Debug, Clone, Default)]
pub struct PcBasis {
    by_lead: BTreeMap<Monomial, Polynomial>,
}

impl PcBasis {
    /// Same result as [`gaussian_reduce`] against the elements in decreasing
    /// order, looking the lead up instead of scanning.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut p = p.clone();
        while let Some((m, c)) = p.lead() {
            match self.by_lead.get(m) {
                Some(b) => {
                    let c = c.clone();
                    p = p.sub_scaled(&c, b);
                }
                None => break,
            }
        }
        p
    }

    /// Elements in decreasing leading-monomial order.
    pub fn elements(&self) -> Vec<Polynomial> {
        self.by_lead.values().rev().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.by_lead.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_lead.is_empty()
    }
}

/// The complementarity polynomial `x + ~x - 1`.
pub fn complementarity(v: Var) -> Polynomial {
    Polynomial::from_terms([
        (Monomial::new([Indeterminate { var: v, dual: false }]), Rational::one()),
        (Monomial::new([Indeterminate { var: v, dual: true }]), Rational::one()),
        (Monomial::one(), -Rational::one()),
    ])
}

/// Indeterminates multiplied in during basis construction: every variable
/// occurring in `polys`, plus its dual in PCR mode, in id order.
pub fn indeterminates(polys: &[&Polynomial], mode: PcMode) -> Vec<Indeterminate> {
    let vars: BTreeSet<Var> = polys.iter().flat_map(|p| p.vars()).collect();
    let mut out = Vec::new();
    for var in vars {
        out.push(Indeterminate { var, dual: false });
        if mode == PcMode::Pcr {
            out.push(Indeterminate { var, dual: true });
        }
    }
    out
}

fn check_inputs(polys: &[&Polynomial], d: usize, mode: PcMode) -> Result<()> {
    for p in polys {
        if p.degree() > d {
            return Err(Error::Budget(format!("polynomial {p} has degree above {d}")));
        }
        if mode == PcMode::Pc && p.has_duals() {
            return Err(Error::Precondition(format!("dual indeterminate in PC mode: {p}")));
        }
    }
    Ok(())
}

/// Builds the basis by the worklist construction: hypotheses (then, in PCR
/// mode, complementarity polynomials) are reduced in FIFO order; each nonzero
/// remainder joins the basis and, if its degree is below `d`, its products
/// with every indeterminate are queued.
pub fn pc_basis(
    hyps: &[Polynomial],
    indets: &[Indeterminate],
    d: usize,
    mode: PcMode,
) -> PcBasis {
    let mut queue: VecDeque<Polynomial> = hyps.iter().cloned().collect();
    if mode == PcMode::Pcr {
        let vars: BTreeSet<Var> = indets.iter().map(|a| a.var).collect();
        queue.extend(vars.into_iter().map(complementarity));
    }
    let mut basis = PcBasis::default();
    while let Some(p) = queue.pop_front() {
        let r = basis.reduce(&p);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        if r.degree() < d {
            queue.extend(indets.iter().map(|&a| r.times(a)));
        }
        let lead = r.lead().expect("nonzero").0.clone();
        basis.by_lead.insert(lead, r);
    }
    basis
}

/// Accepts iff `q = 0` has a degree-`d` derivation from `hyps = 0`.
pub fn decide_pc(hyps: &[Polynomial], q: &Polynomial, d: usize, mode: PcMode) -> Result<bool> {
    let all: Vec<&Polynomial> = hyps.iter().chain(std::iter::once(q)).collect();
    check_inputs(&all, d, mode)?;
    if q.is_zero() {
        return Ok(true);
    }
    let indets = indeterminates(&all, mode);
    let basis = pc_basis(hyps, &indets, d, mode);
    Ok(basis.reduce(q).is_zero())
}
