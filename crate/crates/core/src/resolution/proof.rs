use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::{PartialAssignment, Var};

use super::clause::{Clause, Cnf, Literal};

/// A treelike resolution proof; every node carries the clause it derives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Proof {
    /// A clause of the input CNF, or the tautology axiom.
    Leaf { clause: Clause },
    Weaken { clause: Clause, child: Box<Proof> },
    /// Resolves `pos` (containing `pivot`) with `neg` (containing `!pivot`).
    Cut { clause: Clause, pivot: Var, pos: Box<Proof>, neg: Box<Proof> },
}

impl Proof {
    pub fn leaf(clause: Clause) -> Proof {
        Proof::Leaf { clause }
    }

    pub fn weaken(clause: Clause, child: Proof) -> Proof {
        Proof::Weaken { clause, child: Box::new(child) }
    }

    /// Resolves two proofs on `pivot`, computing the resolvent.
    pub fn cut(pivot: Var, pos: Proof, neg: Proof) -> Proof {
        let x = Literal::new(pivot, true);
        let clause = pos.clause().without(x).union(&neg.clause().without(x.negated()));
        Proof::Cut { clause, pivot, pos: Box::new(pos), neg: Box::new(neg) }
    }

    pub fn clause(&self) -> &Clause {
        match self {
            Proof::Leaf { clause } | Proof::Weaken { clause, .. } | Proof::Cut { clause, .. } => {
                clause
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Proof::Leaf { .. } => 1,
            Proof::Weaken { child, .. } => 1 + child.size(),
            Proof::Cut { pos, neg, .. } => 1 + pos.size() + neg.size(),
        }
    }

    /// Clause space by the pebbling recurrence: a leaf needs 1; a cut needs
    /// `s + 1` when both subtrees need `s`, else the larger of the two.
    pub fn clause_space(&self) -> usize {
        match self {
            Proof::Leaf { .. } => 1,
            Proof::Weaken { child, .. } => child.clause_space(),
            Proof::Cut { pos, neg, .. } => {
                let (a, b) = (pos.clause_space(), neg.clause_space());
                if a == b {
                    a + 1
                } else {
                    a.max(b)
                }
            }
        }
    }
}

/// `floor(log2 len) + 1`.
pub fn space_bound_for_size(len: usize) -> usize {
    assert!(len >= 1, "proof length must be positive");
    len.ilog2() as usize + 1
}

fn check_node(proof: &Proof, phi: &Cnf) -> bool {
    match proof {
        Proof::Leaf { clause } => clause.is_tautology() || phi.clauses().contains(clause),
        Proof::Weaken { clause, child } => {
            child.clause().is_subset_of(clause) && check_node(child, phi)
        }
        Proof::Cut { clause, pivot, pos, neg } => {
            let x = Literal::new(*pivot, true);
            if !pos.clause().contains(x) || !neg.clause().contains(x.negated()) {
                return false;
            }
            let resolvent = pos.clause().without(x).union(&neg.clause().without(x.negated()));
            resolvent == *clause && check_node(pos, phi) && check_node(neg, phi)
        }
    }
}

/// True iff `proof` is a valid treelike derivation of `target` from `phi`.
pub fn check_proof(proof: &Proof, phi: &Cnf, target: &Clause) -> bool {
    proof.clause() == target && check_node(proof, phi)
}

/// Restricts each line of a proof. Lines that become the tautology turn into
/// axiom leaves, a cut on an assigned pivot keeps only the branch whose pivot
/// literal is falsified, and weakenings that add nothing are dropped. The
/// result proves `target|rho` from `phi|rho`, is no larger and uses no more
/// clause space.
pub fn restrict_proof(proof: &Proof, rho: &PartialAssignment) -> Result<Proof> {
    let inner = restrict_node(proof, rho)?;
    let target = proof.clause().restrict(rho);
    if *inner.clause() == target {
        Ok(inner)
    } else {
        Ok(Proof::weaken(target, inner))
    }
}

/// Returns a proof of some subclause of `C|rho` where `C` is the node's clause.
fn restrict_node(proof: &Proof, rho: &PartialAssignment) -> Result<Proof> {
    let here = proof.clause().restrict(rho);
    if here.is_tautology() {
        return Ok(Proof::leaf(Clause::Tautology));
    }
    match proof {
        Proof::Leaf { .. } => Ok(Proof::leaf(here)),
        Proof::Weaken { clause, child } => {
            if !child.clause().is_subset_of(clause) {
                return Err(Error::MalformedProof(format!(
                    "weakening {} does not contain {}",
                    clause,
                    child.clause()
                )));
            }
            restrict_node(child, rho)
        }
        Proof::Cut { pivot, pos, neg, .. } => {
            let x = Literal::new(*pivot, true);
            if !pos.clause().contains(x) || !neg.clause().contains(x.negated()) {
                return Err(Error::MalformedProof(format!("cut on {pivot} lacks its pivot")));
            }
            match rho.get(*pivot) {
                Some(true) => restrict_node(neg, rho),
                Some(false) => restrict_node(pos, rho),
                None => {
                    let p = restrict_node(pos, rho)?;
                    if !p.clause().contains(x) {
                        return Ok(p);
                    }
                    let n = restrict_node(neg, rho)?;
                    if !n.clause().contains(x.negated()) {
                        return Ok(n);
                    }
                    Ok(Proof::cut(*pivot, p, n))
                }
            }
        }
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proof::Leaf { clause } => write!(f, "(leaf {clause})"),
            Proof::Weaken { clause, child } => write!(f, "(weaken {clause} {child})"),
            Proof::Cut { clause, pivot, pos, neg } => {
                write!(f, "(cut {} {clause} {pos} {neg})", pivot.get())
            }
        }
    }
}

struct ProofParser<'a> {
    toks: Vec<&'a str>,
    pos: usize,
}

impl<'a> ProofParser<'a> {
    fn new(s: &'a str) -> Self {
        let mut toks = Vec::new();
        let mut start = None;
        for (i, c) in s.char_indices() {
            if matches!(c, '(' | ')' | '[' | ']') || c.is_whitespace() {
                if let Some(st) = start.take() {
                    toks.push(&s[st..i]);
                }
                if !c.is_whitespace() {
                    toks.push(&s[i..i + 1]);
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(st) = start {
            toks.push(&s[st..]);
        }
        ProofParser { toks, pos: 0 }
    }

    fn next(&mut self) -> std::result::Result<&'a str, String> {
        let t = self.toks.get(self.pos).copied().ok_or("unexpected end of proof text")?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: &str) -> std::result::Result<(), String> {
        let t = self.next()?;
        if t == want {
            Ok(())
        } else {
            Err(format!("expected '{want}', found '{t}'"))
        }
    }

    fn clause(&mut self) -> std::result::Result<Clause, String> {
        self.expect("[")?;
        let mut lits = Vec::new();
        loop {
            match self.next()? {
                "]" => return Ok(Clause::new(lits)),
                "T" => {
                    self.expect("]")?;
                    return Ok(Clause::Tautology);
                }
                t => {
                    let v: i64 = t.parse().map_err(|_| format!("bad literal '{t}'"))?;
                    if v == 0 {
                        return Err("literal 0".into());
                    }
                    lits.push(Literal::from_dimacs(v));
                }
            }
        }
    }

    fn proof(&mut self) -> std::result::Result<Proof, String> {
        self.expect("(")?;
        let p = match self.next()? {
            "leaf" => Proof::leaf(self.clause()?),
            "weaken" => {
                let clause = self.clause()?;
                Proof::weaken(clause, self.proof()?)
            }
            "cut" => {
                let t = self.next()?;
                let v: u32 = t.parse().map_err(|_| format!("bad pivot '{t}'"))?;
                if v == 0 {
                    return Err("pivot 0".into());
                }
                let clause = self.clause()?;
                let pos = self.proof()?;
                let neg = self.proof()?;
                Proof::Cut { clause, pivot: Var::new(v), pos: Box::new(pos), neg: Box::new(neg) }
            }
            t => return Err(format!("unknown proof step '{t}'")),
        };
        self.expect(")")?;
        Ok(p)
    }
}

impl FromStr for Proof {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Proof, String> {
        let mut p = ProofParser::new(s);
        let proof = p.proof()?;
        if p.pos != p.toks.len() {
            return Err("trailing text after proof".into());
        }
        Ok(proof)
    }
}
