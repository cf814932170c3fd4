use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::resolution::Literal;

use super::kdnf::{terms_subset, KDnf, Term};
use super::trace::{ResKStep, ResKTrace};

/// Result of a width-bounded RES(k) decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResKOutcome {
    pub accepted: bool,
    /// A replayable derivation of the target when accepted.
    pub trace: Option<ResKTrace>,
    /// Number of derived table entries after each round.
    pub table_sizes: Vec<usize>,
}

/// How a table entry was obtained. Premises may be silently weakened (within
/// the width bound) before the rule is applied; `expand` makes that explicit.
#[derive(Debug, Clone)]
enum Origin {
    Hyp(usize),
    Elim { premise: usize, term: Term, literal: Literal },
    Cut { left: usize, right: usize, term: Term },
    Intro { premises: Vec<usize>, term: Term, side: Vec<Term> },
}

struct Entry {
    terms: Vec<Term>,
    origin: Origin,
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

struct Table {
    entries: Vec<Entry>,
    seen: HashSet<Vec<Term>>,
    w: usize,
}

impl Table {
    /// Adds a derived line unless it is too wide or already implied by
    /// weakening an existing entry. Returns whether it was added.
    fn insert(&mut self, terms: Vec<Term>, origin: Origin) -> bool {
        if terms.len() > self.w || self.seen.contains(&terms) {
            return false;
        }
        if self.entries.iter().any(|e| terms_subset(&e.terms, &terms)) {
            return false;
        }
        self.seen.insert(terms.clone());
        self.entries.push(Entry { terms, origin });
        true
    }
}

/// Decides whether `target` has a RES(k) derivation from `hyps` in which
/// every derived line has at most `w` terms.
///
/// The table stores derived k-DNFs closed under weakening implicitly: a line
/// is derivable iff it contains some stored entry (or equals a hypothesis).
/// Each round applies cut, and-introduction and and-elimination to the
/// entries of the previous round, weakening premises only as far as the rule
/// requires, until no new entry appears.
pub fn decide_resk_width(hyps: &[KDnf], target: &KDnf, k: usize, w: usize) -> Result<ResKOutcome> {
    let Some(goal) = target.terms() else {
        return Ok(ResKOutcome { accepted: true, trace: Some(ResKTrace::default()), table_sizes: vec![] });
    };
    if goal.len() > w {
        return Err(Error::Budget(format!("target has {} terms, width bound is {w}", goal.len())));
    }
    for f in hyps.iter().chain(std::iter::once(target)) {
        if f.max_term_size() > k {
            return Err(Error::Precondition(format!("{f} has a term with more than {k} literals")));
        }
    }

    let mut table = Table { entries: Vec::new(), seen: HashSet::new(), w };
    for (i, h) in hyps.iter().enumerate() {
        // `True` hypotheses are axioms and never needed as premises
        if let Some(ts) = h.terms() {
            table.entries.push(Entry { terms: ts.to_vec(), origin: Origin::Hyp(i) });
        }
    }
    let done = |t: &Table| t.entries.iter().position(|e| terms_subset(&e.terms, goal));
    let mut table_sizes = Vec::new();
    let derived = |t: &Table| t.entries.iter().filter(|e| !matches!(e.origin, Origin::Hyp(_))).count();

    loop {
        if let Some(i) = done(&table) {
            let trace = expand(&table, i, hyps, goal);
            return Ok(ResKOutcome { accepted: true, trace: Some(trace), table_sizes });
        }
        let snapshot = table.entries.len();
        let candidates = round(&table.entries[..snapshot], k, w);
        let mut grew = false;
        for (terms, origin) in candidates {
            if table.insert(terms, origin) {
                grew = true;
                if let Some(i) = done(&table) {
                    table_sizes.push(derived(&table));
                    let trace = expand(&table, i, hyps, goal);
                    return Ok(ResKOutcome { accepted: true, trace: Some(trace), table_sizes });
                }
            }
        }
        table_sizes.push(derived(&table));
        if !grew {
            return Ok(ResKOutcome { accepted: false, trace: None, table_sizes });
        }
    }
}

/// A premise may be weakened to `to` if that keeps it within the width
/// bound, or if nothing needs to be added.
fn weakenable(from: &[Term], to: &[Term], w: usize) -> bool {
    to.len() <= w || from.len() == to.len()
}

fn round(entries: &[Entry], k: usize, w: usize) -> Vec<(Vec<Term>, Origin)> {
    let mut out = Vec::new();
    // entries holding each unit literal
    let mut units: BTreeMap<Literal, Vec<usize>> = BTreeMap::new();
    for (i, e) in entries.iter().enumerate() {
        for t in &e.terms {
            if t.len() == 1 {
                units.entry(t.literals()[0]).or_default().push(i);
            }
        }
    }

    for (i, e) in entries.iter().enumerate() {
        for t in e.terms.iter().filter(|t| t.len() >= 2) {
            let rest = minus(&e.terms, std::slice::from_ref(t));
            for &l in t.literals() {
                let c = union(&rest, &[Term::unit(l)]);
                if c.len() <= w {
                    out.push((c, Origin::Elim { premise: i, term: t.clone(), literal: l }));
                }
            }
        }
    }

    for (i, e1) in entries.iter().enumerate() {
        for t in &e1.terms {
            let negs: Vec<Term> = t.literals().iter().map(|l| Term::unit(l.negated())).collect();
            let a = minus(&e1.terms, std::slice::from_ref(t));
            if a.len() > w {
                continue;
            }
            let mut partners: Vec<usize> = t
                .literals()
                .iter()
                .filter_map(|l| units.get(&l.negated()))
                .flatten()
                .copied()
                .collect();
            partners.sort_unstable();
            partners.dedup();
            for j in partners {
                let e2 = &entries[j].terms;
                let p2 = union(e2, &negs);
                if !weakenable(e2, &p2, w) {
                    continue;
                }
                let c = union(&a, &minus(e2, &negs));
                if c.len() <= w {
                    out.push((c, Origin::Cut { left: i, right: j, term: t.clone() }));
                }
            }
        }
    }

    let lits: Vec<Literal> = units.keys().copied().collect();
    let mut chosen = Vec::new();
    for j in 2..=k {
        intro_literals(&lits, 0, j, &mut chosen, &units, entries, w, &mut out);
    }
    out
}

/// Chooses `j` literals on distinct variables for and-introduction.
#[allow(clippy::too_many_arguments)]
fn intro_literals(
    lits: &[Literal],
    from: usize,
    j: usize,
    chosen: &mut Vec<Literal>,
    units: &BTreeMap<Literal, Vec<usize>>,
    entries: &[Entry],
    w: usize,
    out: &mut Vec<(Vec<Term>, Origin)>,
) {
    if chosen.len() == j {
        let term = Term::new(chosen.iter().copied()).expect("distinct variables");
        let mut picks = Vec::new();
        intro_premises(&term, &mut picks, Vec::new(), units, entries, w, out);
        return;
    }
    for idx in from..lits.len() {
        let l = lits[idx];
        if chosen.iter().any(|c| c.var() == l.var()) {
            continue;
        }
        chosen.push(l);
        intro_literals(lits, idx + 1, j, chosen, units, entries, w, out);
        chosen.pop();
    }
}

/// Picks one premise containing the unit of each literal of `term`; the
/// shared side formula is the union of the premises minus their units.
fn intro_premises(
    term: &Term,
    picks: &mut Vec<usize>,
    side: Vec<Term>,
    units: &BTreeMap<Literal, Vec<usize>>,
    entries: &[Entry],
    w: usize,
    out: &mut Vec<(Vec<Term>, Origin)>,
) {
    let lits = term.literals();
    if picks.len() == lits.len() {
        let ok = lits.iter().zip(picks.iter()).all(|(&l, &p)| {
            weakenable(&entries[p].terms, &union(&side, &[Term::unit(l)]), w)
        });
        let c = union(&side, std::slice::from_ref(term));
        if ok && c.len() <= w {
            out.push((c, Origin::Intro { premises: picks.clone(), term: term.clone(), side }));
        }
        return;
    }
    let l = lits[picks.len()];
    for &p in &units[&l] {
        let s = union(&side, &minus(&entries[p].terms, &[Term::unit(l)]));
        if s.len() > w {
            continue;
        }
        picks.push(p);
        intro_premises(term, picks, s, units, entries, w, out);
        picks.pop();
    }
}

/// Unfolds the entry `goal_entry` into strict derivation steps ending in
/// `goal`.
fn expand(table: &Table, goal_entry: usize, hyps: &[KDnf], goal: &[Term]) -> ResKTrace {
    let mut ex = Expander { table, hyps, steps: Vec::new(), memo: HashMap::new() };
    let s = ex.entry(goal_entry);
    ex.weaken(s, goal);
    ResKTrace { steps: ex.steps }
}

struct Expander<'a> {
    table: &'a Table,
    hyps: &'a [KDnf],
    steps: Vec<ResKStep>,
    memo: HashMap<usize, usize>,
}

impl Expander<'_> {
    fn formula(&self, step: usize) -> &[Term] {
        self.steps[step].formula().terms().expect("derived lines are proper")
    }

    fn push(&mut self, step: ResKStep) -> usize {
        self.steps.push(step);
        self.steps.len() - 1
    }

    /// Step deriving exactly `to`, weakening `step` if needed.
    fn weaken(&mut self, step: usize, to: &[Term]) -> usize {
        if self.formula(step) == to {
            step
        } else {
            self.push(ResKStep::Weaken { premise: step, formula: KDnf::Terms(to.to_vec()) })
        }
    }

    fn entry(&mut self, i: usize) -> usize {
        if let Some(&s) = self.memo.get(&i) {
            return s;
        }
        let e = &self.table.entries[i];
        let formula = KDnf::Terms(e.terms.clone());
        let step = match &e.origin {
            Origin::Hyp(h) => self.push(ResKStep::Hyp { index: *h, formula: self.hyps[*h].clone() }),
            Origin::Elim { premise, term, literal } => {
                let p = self.entry(*premise);
                self.push(ResKStep::AndElim { premise: p, term: term.clone(), literal: *literal, formula })
            }
            Origin::Cut { left, right, term } => {
                let l = self.entry(*left);
                let r = self.entry(*right);
                let negs: Vec<Term> =
                    term.literals().iter().map(|x| Term::unit(x.negated())).collect();
                let widened = union(self.formula(r), &negs);
                let r = self.weaken(r, &widened);
                self.push(ResKStep::Cut { left: l, right: r, term: term.clone(), formula })
            }
            Origin::Intro { premises, term, side } => {
                let mut ps = Vec::with_capacity(premises.len());
                for (&p, &l) in premises.iter().zip(term.literals()) {
                    let s = self.entry(p);
                    let to = union(side, &[Term::unit(l)]);
                    ps.push(self.weaken(s, &to));
                }
                self.push(ResKStep::AndIntro { premises: ps, term: term.clone(), formula })
            }
        };
        self.memo.insert(i, step);
        step
    }
}
