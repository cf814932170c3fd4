use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Formula, PartialAssignment};
use crate::resolution::{Clause, Cnf, Literal};

/// A conjunction of literals without complementary pairs, literals sorted.
/// Terms order by size, then by their literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term(Vec<Literal>);

impl Term {
    /// `None` when the literals contain a complementary pair.
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Option<Term> {
        let mut v: Vec<Literal> = lits.into_iter().collect();
        v.sort();
        v.dedup();
        if v.windows(2).any(|p| p[0].var() == p[1].var()) {
            None
        } else {
            Some(Term(v))
        }
    }

    pub fn unit(l: Literal) -> Term {
        Term(vec![l])
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        self.0.iter().all(|l| l.eval(x))
    }

    /// `None` if a literal is falsified, else the term without its
    /// satisfied literals (empty when fully satisfied).
    pub fn restrict(&self, rho: &PartialAssignment) -> Option<Term> {
        let mut out = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match l.value(rho) {
                Some(false) => return None,
                Some(true) => {}
                None => out.push(l),
            }
        }
        Some(Term(out))
    }

    pub fn to_formula(&self) -> Formula {
        Formula::and(self.0.iter().map(|l| l.to_formula()).collect())
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "&")?;
            }
            if !l.is_positive() {
                write!(f, "-")?;
            }
            write!(f, "x{}", l.var().get())?;
        }
        Ok(())
    }
}

/// A disjunction of terms in canonical order. `Terms(vec![])` is the false
/// formula; `True` stands for the disjunction of all literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KDnf {
    True,
    Terms(Vec<Term>),
}

impl KDnf {
    /// Canonicalizes: an empty term makes the whole formula true.
    pub fn new(terms: impl IntoIterator<Item = Term>) -> KDnf {
        let mut v: Vec<Term> = terms.into_iter().collect();
        if v.iter().any(Term::is_empty) {
            return KDnf::True;
        }
        v.sort();
        v.dedup();
        KDnf::Terms(v)
    }

    /// Builds from literal lists, dropping contradictory conjunctions.
    pub fn from_literal_lists(lists: impl IntoIterator<Item = Vec<Literal>>) -> KDnf {
        KDnf::new(lists.into_iter().filter_map(Term::new))
    }

    pub fn falsum() -> KDnf {
        KDnf::Terms(Vec::new())
    }

    pub fn is_true(&self) -> bool {
        matches!(self, KDnf::True)
    }

    pub fn is_falsum(&self) -> bool {
        matches!(self, KDnf::Terms(v) if v.is_empty())
    }

    pub fn terms(&self) -> Option<&[Term]> {
        match self {
            KDnf::True => None,
            KDnf::Terms(v) => Some(v),
        }
    }

    /// Number of terms; `None` for `True`.
    pub fn width(&self) -> Option<usize> {
        self.terms().map(<[Term]>::len)
    }

    /// Largest term size.
    pub fn max_term_size(&self) -> usize {
        self.terms().map_or(0, |ts| ts.iter().map(Term::len).max().unwrap_or(0))
    }

    pub fn max_var(&self) -> u32 {
        self.terms().map_or(0, |ts| {
            ts.iter().flat_map(|t| t.literals()).map(|l| l.var().get()).max().unwrap_or(0)
        })
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        match self {
            KDnf::True => true,
            KDnf::Terms(v) => v.iter().any(|t| t.eval(x)),
        }
    }

    /// Every term of `self` is a term of `other`.
    pub fn is_subset_of(&self, other: &KDnf) -> bool {
        match (self, other) {
            (_, KDnf::True) => true,
            (KDnf::True, _) => false,
            (KDnf::Terms(a), KDnf::Terms(b)) => terms_subset(a, b),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            KDnf::True => Formula::Const(true),
            KDnf::Terms(v) => Formula::or(v.iter().map(Term::to_formula).collect()),
        }
    }
}

impl fmt::Display for KDnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KDnf::True => write!(f, "T"),
            KDnf::Terms(v) if v.is_empty() => write!(f, "F"),
            KDnf::Terms(v) => {
                for (i, t) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
        }
    }
}

/// Subset test on sorted, deduplicated term lists.
pub(crate) fn terms_subset(a: &[Term], b: &[Term]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for t in a {
        while j < b.len() && b[j] < *t {
            j += 1;
        }
        if j == b.len() || b[j] != *t {
            return false;
        }
        j += 1;
    }
    true
}

/// `phi|rho`: falsified terms drop out, satisfied literals are removed, and a
/// fully satisfied term makes the result `True`.
pub fn restrict_kdnf(phi: &KDnf, rho: &PartialAssignment) -> KDnf {
    match phi {
        KDnf::True => KDnf::True,
        KDnf::Terms(v) => KDnf::new(v.iter().filter_map(|t| t.restrict(rho))),
    }
}

/// Negates a disjunction of CNFs into a list of DNFs whose conjunction is
/// equivalent to the negation. Each clause becomes one term, so clauses
/// wider than `k` are rejected. The empty disjunction negates to `[True]`.
pub fn negate_query(query: &[Cnf], k: usize) -> Result<Vec<KDnf>> {
    if query.is_empty() {
        return Ok(vec![KDnf::True]);
    }
    let mut out = Vec::with_capacity(query.len());
    for cnf in query {
        let mut terms = Vec::new();
        for c in cnf.clauses() {
            match c {
                // the negated tautology is a false conjunction
                Clause::Tautology => {}
                Clause::Lits(lits) => {
                    if lits.len() > k {
                        return Err(Error::Precondition(format!(
                            "query clause {c} has {} literals, more than k = {k}",
                            lits.len()
                        )));
                    }
                    terms.push(
                        Term::new(lits.iter().map(|l| l.negated())).expect("clause is canonical"),
                    );
                }
            }
        }
        out.push(KDnf::new(terms));
    }
    Ok(out)
}
