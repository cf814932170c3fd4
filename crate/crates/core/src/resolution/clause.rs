use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Formula, PartialAssignment, Var};

/// `x_i` or `!x_i`. Literals order by variable, positive before negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    var: Var,
    positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Literal {
        Literal { var, positive }
    }

    pub fn pos(index: u32) -> Literal {
        Literal::new(Var::new(index), true)
    }

    pub fn neg(index: u32) -> Literal {
        Literal::new(Var::new(index), false)
    }

    /// DIMACS convention: `3` is `x3`, `-3` is `!x3`.
    pub fn from_dimacs(v: i64) -> Literal {
        assert!(v != 0, "0 is not a literal");
        Literal::new(Var::new(v.unsigned_abs() as u32), v > 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var.get() as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Literal {
        Literal { var: self.var, positive: !self.positive }
    }

    pub fn eval(self, x: &[bool]) -> bool {
        x[self.var.idx()] == self.positive
    }

    /// Value under a partial assignment, `None` if the variable is masked.
    pub fn value(self, rho: &PartialAssignment) -> Option<bool> {
        rho.get(self.var).map(|b| b == self.positive)
    }

    pub fn to_formula(self) -> Formula {
        Formula::lit(self.var.get(), self.positive)
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.var, !self.positive).cmp(&(other.var, !other.positive))
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals. Any clause holding a complementary pair is the
/// tautology, which stands for the disjunction of all literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Clause {
    Tautology,
    Lits(Vec<Literal>),
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Clause {
        let mut v: Vec<Literal> = lits.into_iter().collect();
        v.sort();
        v.dedup();
        if v.windows(2).any(|p| p[0].var == p[1].var) {
            Clause::Tautology
        } else {
            Clause::Lits(v)
        }
    }

    pub fn empty() -> Clause {
        Clause::Lits(Vec::new())
    }

    pub fn from_dimacs(lits: &[i64]) -> Clause {
        Clause::new(lits.iter().map(|&l| Literal::from_dimacs(l)))
    }

    pub fn is_tautology(&self) -> bool {
        matches!(self, Clause::Tautology)
    }

    /// The empty clause.
    pub fn is_falsum(&self) -> bool {
        matches!(self, Clause::Lits(v) if v.is_empty())
    }

    /// Literals of a proper clause; `None` for the tautology.
    pub fn literals(&self) -> Option<&[Literal]> {
        match self {
            Clause::Tautology => None,
            Clause::Lits(v) => Some(v),
        }
    }

    pub fn width(&self) -> Option<usize> {
        self.literals().map(<[Literal]>::len)
    }

    pub fn contains(&self, lit: Literal) -> bool {
        match self {
            Clause::Tautology => true,
            Clause::Lits(v) => v.binary_search(&lit).is_ok(),
        }
    }

    pub fn max_var(&self) -> u32 {
        match self {
            Clause::Tautology => 0,
            Clause::Lits(v) => v.iter().map(|l| l.var.get()).max().unwrap_or(0),
        }
    }

    /// Every literal of `self` occurs in `other`.
    pub fn is_subset_of(&self, other: &Clause) -> bool {
        match (self, other) {
            (_, Clause::Tautology) => true,
            (Clause::Tautology, Clause::Lits(_)) => false,
            (Clause::Lits(a), Clause::Lits(b)) => {
                let mut j = 0;
                for l in a {
                    while j < b.len() && b[j] < *l {
                        j += 1;
                    }
                    if j == b.len() || b[j] != *l {
                        return false;
                    }
                    j += 1;
                }
                true
            }
        }
    }

    pub fn union(&self, other: &Clause) -> Clause {
        match (self, other) {
            (Clause::Lits(a), Clause::Lits(b)) => Clause::new(a.iter().chain(b).copied()),
            _ => Clause::Tautology,
        }
    }

    pub fn with(&self, lit: Literal) -> Clause {
        self.union(&Clause::Lits(vec![lit]))
    }

    /// Removes one literal; the tautology is unchanged.
    pub fn without(&self, lit: Literal) -> Clause {
        match self {
            Clause::Tautology => Clause::Tautology,
            Clause::Lits(v) => Clause::Lits(v.iter().copied().filter(|&l| l != lit).collect()),
        }
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        match self {
            Clause::Tautology => true,
            Clause::Lits(v) => v.iter().any(|l| l.eval(x)),
        }
    }

    /// `C|rho`: the tautology if some literal is satisfied, otherwise the
    /// clause without its falsified literals.
    pub fn restrict(&self, rho: &PartialAssignment) -> Clause {
        match self {
            Clause::Tautology => Clause::Tautology,
            Clause::Lits(v) => {
                let mut out = Vec::with_capacity(v.len());
                for &l in v {
                    match l.value(rho) {
                        Some(true) => return Clause::Tautology,
                        Some(false) => {}
                        None => out.push(l),
                    }
                }
                Clause::Lits(out)
            }
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            Clause::Tautology => Formula::Const(true),
            Clause::Lits(v) => Formula::or(v.iter().map(|l| l.to_formula()).collect()),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::Tautology => write!(f, "[T]"),
            Clause::Lits(v) => {
                write!(f, "[")?;
                for (i, l) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// A set of clauses over `n` variables, deduplicated in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cnf {
    n: usize,
    clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(n: usize, clauses: impl IntoIterator<Item = Clause>) -> Result<Cnf> {
        let mut out: Vec<Clause> = Vec::new();
        for c in clauses {
            let max = c.max_var();
            if max as usize > n {
                return Err(Error::VarOutOfRange { var: max, n });
            }
            if !out.contains(&c) {
                out.push(c);
            }
        }
        Ok(Cnf { n, clauses: out })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.eval(x))
    }

    /// Restricts every clause and drops those that become the tautology.
    pub fn restrict(&self, rho: &PartialAssignment) -> Cnf {
        let mut out: Vec<Clause> = Vec::new();
        for c in &self.clauses {
            let r = c.restrict(rho);
            if !r.is_tautology() && !out.contains(&r) {
                out.push(r);
            }
        }
        Cnf { n: self.n, clauses: out }
    }

    pub fn to_formula(&self) -> Formula {
        Formula::and(self.clauses.iter().map(Clause::to_formula).collect())
    }
}
