use std::fmt;

use crate::error::{Error, Result};
use crate::resolution::Literal;

use super::kdnf::{terms_subset, KDnf, Term};

/// One line of a RES(k) derivation. Premises refer to earlier steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResKStep {
    Hyp { index: usize, formula: KDnf },
    Weaken { premise: usize, formula: KDnf },
    /// From `A | T` (left) and `B | !l1 | ... | !lj` (right) infer `A | B`.
    Cut { left: usize, right: usize, term: Term, formula: KDnf },
    /// From `l1 | A, ..., lj | A` infer `(l1 & ... & lj) | A`; premises
    /// follow the order of the term's literals.
    AndIntro { premises: Vec<usize>, term: Term, formula: KDnf },
    /// From `T | A` infer `l | A` for a literal `l` of `T`.
    AndElim { premise: usize, term: Term, literal: Literal, formula: KDnf },
}

impl ResKStep {
    pub fn formula(&self) -> &KDnf {
        match self {
            ResKStep::Hyp { formula, .. }
            | ResKStep::Weaken { formula, .. }
            | ResKStep::Cut { formula, .. }
            | ResKStep::AndIntro { formula, .. }
            | ResKStep::AndElim { formula, .. } => formula,
        }
    }
}

/// A derivation whose last step proves the target. An empty trace proves
/// only `True`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResKTrace {
    pub steps: Vec<ResKStep>,
}

impl fmt::Display for ResKTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            match s {
                ResKStep::Hyp { index, formula } => writeln!(f, "{i}: {formula}  hyp {index}")?,
                ResKStep::Weaken { premise, formula } => {
                    writeln!(f, "{i}: {formula}  weaken {premise}")?
                }
                ResKStep::Cut { left, right, term, formula } => {
                    writeln!(f, "{i}: {formula}  cut {left} {right} on {term}")?
                }
                ResKStep::AndIntro { premises, term, formula } => {
                    let ps: Vec<String> = premises.iter().map(|p| p.to_string()).collect();
                    writeln!(f, "{i}: {formula}  and-intro {} into {term}", ps.join(" "))?
                }
                ResKStep::AndElim { premise, term, literal, formula } => {
                    writeln!(f, "{i}: {formula}  and-elim {premise} {term} to {literal}")?
                }
            }
        }
        Ok(())
    }
}

fn union(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut v: Vec<Term> = a.iter().chain(b).cloned().collect();
    v.sort();
    v.dedup();
    v
}

fn minus(a: &[Term], drop: &[Term]) -> Vec<Term> {
    a.iter().filter(|t| !drop.contains(t)).cloned().collect()
}

fn fail<T>(i: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::MalformedProof(format!("step {i}: {}", msg.into())))
}

/// Replays a trace rule by rule. Every derived line must have at most `w`
/// terms and every term at most `k` literals; hypotheses are exempt from the
/// width bound.
pub fn check_resk_trace(
    trace: &ResKTrace,
    hyps: &[KDnf],
    target: &KDnf,
    k: usize,
    w: usize,
) -> Result<()> {
    if trace.steps.is_empty() {
        return if target.is_true() {
            Ok(())
        } else {
            Err(Error::MalformedProof("empty trace for a non-trivial target".into()))
        };
    }
    let mut lines: Vec<&[Term]> = Vec::with_capacity(trace.steps.len());
    for (i, step) in trace.steps.iter().enumerate() {
        let Some(c) = step.formula().terms() else {
            return fail(i, "line is the constant True");
        };
        if c.iter().any(|t| t.len() > k || t.is_empty()) {
            return fail(i, format!("term size outside 1..={k}"));
        }
        let prem = |p: usize| -> Result<&[Term]> {
            if p < i {
                Ok(lines[p])
            } else {
                fail(i, format!("premise {p} is not an earlier step"))
            }
        };
        let derived = !matches!(step, ResKStep::Hyp { .. });
        if derived && c.len() > w {
            return fail(i, format!("width {} exceeds {w}", c.len()));
        }
        match step {
            ResKStep::Hyp { index, formula } => {
                if hyps.get(*index) != Some(formula) {
                    return fail(i, format!("not hypothesis {index}"));
                }
            }
            ResKStep::Weaken { premise, .. } => {
                if !terms_subset(prem(*premise)?, c) {
                    return fail(i, "weakening drops a term");
                }
            }
            ResKStep::Cut { left, right, term, .. } => {
                let (p1, p2) = (prem(*left)?, prem(*right)?);
                if term.len() > k || !p1.contains(term) {
                    return fail(i, "left premise lacks the cut term");
                }
                let negs: Vec<Term> =
                    term.literals().iter().map(|l| Term::unit(l.negated())).collect();
                if negs.iter().any(|t| !p2.contains(t)) {
                    return fail(i, "right premise lacks a negated literal");
                }
                let base = union(&minus(p1, std::slice::from_ref(term)), &minus(p2, &negs));
                let mut extra = negs.clone();
                extra.push(term.clone());
                let top = union(&base, &extra);
                if !terms_subset(&base, c) || !terms_subset(c, &top) {
                    return fail(i, "conclusion is not the resolvent");
                }
            }
            ResKStep::AndIntro { premises, term, .. } => {
                if premises.len() != term.len() || term.len() > k {
                    return fail(i, "premise count does not match the term");
                }
                let ps = premises.iter().map(|&p| prem(p)).collect::<Result<Vec<_>>>()?;
                let ok = [minus(c, std::slice::from_ref(term)), c.to_vec()].iter().any(|a| {
                    union(a, std::slice::from_ref(term)) == c
                        && term
                            .literals()
                            .iter()
                            .zip(&ps)
                            .all(|(&l, p)| union(a, &[Term::unit(l)]) == *p)
                });
                if !ok {
                    return fail(i, "premises do not share the side formula");
                }
            }
            ResKStep::AndElim { premise, term, literal, .. } => {
                let p = prem(*premise)?;
                if !p.contains(term) || !term.literals().contains(literal) {
                    return fail(i, "eliminated term or literal missing");
                }
                let unit = [Term::unit(*literal)];
                let ok = [minus(p, std::slice::from_ref(term)), p.to_vec()]
                    .iter()
                    .any(|a| union(a, std::slice::from_ref(term)) == p && union(a, &unit) == c);
                if !ok {
                    return fail(i, "conclusion does not match the premise");
                }
            }
        }
        lines.push(c);
    }
    if trace.steps.last().map(ResKStep::formula) != Some(target) {
        return Err(Error::MalformedProof("last step is not the target".into()));
    }
    Ok(())
}
