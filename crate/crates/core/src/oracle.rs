//! Brute-force entailment and satisfiability by enumerating `{0,1}^n`.

use crate::error::{Error, Result};
use crate::formula::{assignments, evaluate, Formula};
use crate::resolution::Cnf;

pub const DEFAULT_CAP: usize = 20;

/// Enumeration-based oracle with a configurable variable cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    pub cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_CAP }
    }
}

impl Oracle {
    pub fn new(cap: usize) -> Self {
        Oracle { cap }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.cap {
            Err(Error::EnumerationCap { n, cap: self.cap })
        } else {
            Ok(())
        }
    }

    /// Every model of all of `hyps` satisfies `phi`.
    pub fn entails(&self, hyps: &[Formula], phi: &Formula, n: usize) -> Result<bool> {
        self.check(n)?;
        for f in hyps.iter().chain(std::iter::once(phi)) {
            if f.max_var() as usize > n {
                return Err(Error::VarOutOfRange { var: f.max_var(), n });
            }
        }
        for x in assignments(n) {
            if hyps.iter().all(|h| evaluate(h, &x).expect("range checked"))
                && !evaluate(phi, &x).expect("range checked")
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First model of `formulas` in lexicographic order.
    pub fn first_model(&self, formulas: &[Formula], n: usize) -> Result<Option<Vec<bool>>> {
        self.check(n)?;
        for f in formulas {
            if f.max_var() as usize > n {
                return Err(Error::VarOutOfRange { var: f.max_var(), n });
            }
        }
        Ok(assignments(n).find(|x| formulas.iter().all(|f| evaluate(f, x).expect("range checked"))))
    }

    /// First satisfying assignment of `phi` in lexicographic order.
    pub fn sat_solve(&self, phi: &Cnf) -> Result<Option<Vec<bool>>> {
        self.check(phi.num_vars())?;
        Ok(assignments(phi.num_vars()).find(|x| phi.eval(x)))
    }
}

pub fn entails(hyps: &[Formula], phi: &Formula, n: usize) -> Result<bool> {
    Oracle::default().entails(hyps, phi, n)
}

pub fn sat_solve(phi: &Cnf) -> Result<Option<Vec<bool>>> {
    Oracle::default().sat_solve(phi)
}
