use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::formula::Var;

use super::ineq::{apply_rule, CpAxiom, CpRule, LinIneq};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CpStep {
    Axiom(CpAxiom),
    Hypothesis(usize),
    Add(usize, usize),
    Multiply(usize, BigInt),
    Divide(usize, BigInt),
    /// Adds the given inequality, which must hold at every Boolean point.
    Weaken(usize, LinIneq),
}

/// A derivation: each step with its conclusion; premises are earlier step
/// indices and the last conclusion is the target.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CpTrace {
    pub steps: Vec<(CpStep, LinIneq)>,
}

impl fmt::Display for CpTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (step, line)) in self.steps.iter().enumerate() {
            let how = match step {
                CpStep::Axiom(CpAxiom::NonNeg(v)) => format!("axiom {v} >= 0"),
                CpStep::Axiom(CpAxiom::AtMostOne(v)) => format!("axiom -{v} >= -1"),
                CpStep::Axiom(CpAxiom::Trivial) => "axiom 0 >= -1".to_string(),
                CpStep::Hypothesis(h) => format!("hyp {h}"),
                CpStep::Add(a, b) => format!("add {a} {b}"),
                CpStep::Multiply(a, d) => format!("multiply {a} by {d}"),
                CpStep::Divide(a, d) => format!("divide {a} by {d}"),
                CpStep::Weaken(a, xi) => format!("weaken {a} with {xi}"),
            };
            writeln!(f, "{i}: {line}  {how}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpOutcome {
    pub accepted: bool,
    pub trace: Option<CpTrace>,
}

/// Replays a trace. Derived lines must be `w`-sparse and have l1-norm at
/// most `l`; axioms and hypotheses are exempt.
pub fn check_cp_trace(
    trace: &CpTrace,
    hyps: &[LinIneq],
    target: &LinIneq,
    num_vars: usize,
    w: usize,
    l: &BigInt,
) -> Result<()> {
    let fail = |i: usize, msg: String| Err(Error::MalformedProof(format!("step {i}: {msg}")));
    for (i, (step, line)) in trace.steps.iter().enumerate() {
        let prem = |p: usize| -> Result<&LinIneq> {
            if p < i {
                Ok(&trace.steps[p].1)
            } else {
                Err(Error::MalformedProof(format!("step {i}: premise {p} is not earlier")))
            }
        };
        let expected = match step {
            CpStep::Axiom(ax) => {
                if let CpAxiom::NonNeg(v) | CpAxiom::AtMostOne(v) = ax {
                    if v.idx() >= num_vars {
                        return fail(i, format!("axiom on {v} outside {num_vars} variables"));
                    }
                }
                ax.ineq()
            }
            CpStep::Hypothesis(h) => match hyps.get(*h) {
                Some(x) => x.clone(),
                None => return fail(i, format!("no hypothesis {h}")),
            },
            CpStep::Add(a, b) => apply_rule(CpRule::Add(prem(*a)?, prem(*b)?))?,
            CpStep::Multiply(a, d) => apply_rule(CpRule::Multiply(prem(*a)?, d))?,
            CpStep::Divide(a, d) => apply_rule(CpRule::Divide(prem(*a)?, d))?,
            CpStep::Weaken(a, xi) => apply_rule(CpRule::Weaken(prem(*a)?, xi))?,
        };
        if expected != *line {
            return fail(i, format!("claims {line}, rule gives {expected}"));
        }
        let exempt = matches!(step, CpStep::Axiom(_) | CpStep::Hypothesis(_));
        if !exempt && !line.within(w, l) {
            return fail(i, format!("{line} exceeds sparsity {w} or norm {l}"));
        }
    }
    match trace.steps.last() {
        Some((_, last)) if last == target => Ok(()),
        _ => Err(Error::MalformedProof("trace does not end in the target".into())),
    }
}

#[derive(Debug, Clone)]
enum Origin {
    Axiom(CpAxiom),
    Hyp(usize),
    Add(usize, usize),
    Multiply(usize, i64),
    Divide(usize, i64),
}

/// Decides whether `target` has a cutting-planes derivation from `hyps` and
/// the axioms `x >= 0`, `-x >= -1` (for `x1..x{num_vars}`) and `0 >= -1` in
/// which every derived line is `w`-sparse with l1-norm at most `l`.
///
/// Sums of pairs, multiples by `2..=l` and exact divisions by `2..=l` are
/// closed over until the target appears or nothing new does; each round
/// only combines pairs involving a line from the previous round. Premises
/// themselves are not held to the budgets.
pub fn decide_cp(
    hyps: &[LinIneq],
    target: &LinIneq,
    num_vars: usize,
    w: usize,
    l: u64,
) -> Result<CpOutcome> {
    let big_l = BigInt::from(l);
    if !target.within(w, &big_l) {
        return Err(Error::Budget(format!("target {target} exceeds sparsity {w} or norm {l}")));
    }
    for h in hyps.iter().chain(std::iter::once(target)) {
        if h.max_var() as usize > num_vars {
            return Err(Error::VarOutOfRange { var: h.max_var(), n: num_vars });
        }
    }

    let mut lines: Vec<(LinIneq, Origin)> = Vec::new();
    let mut index: HashMap<LinIneq, usize> = HashMap::new();
    let push = |lines: &mut Vec<(LinIneq, Origin)>,
                index: &mut HashMap<LinIneq, usize>,
                x: LinIneq,
                o: Origin| {
        if !index.contains_key(&x) {
            index.insert(x.clone(), lines.len());
            lines.push((x, o));
        }
    };
    for i in 1..=num_vars {
        let v = Var::new(i as u32);
        for ax in [CpAxiom::NonNeg(v), CpAxiom::AtMostOne(v)] {
            push(&mut lines, &mut index, ax.ineq(), Origin::Axiom(ax));
        }
    }
    push(&mut lines, &mut index, CpAxiom::Trivial.ineq(), Origin::Axiom(CpAxiom::Trivial));
    for (i, h) in hyps.iter().enumerate() {
        push(&mut lines, &mut index, h.clone(), Origin::Hyp(i));
    }

    let mut fresh_from = 0;
    loop {
        if let Some(&t) = index.get(target) {
            return Ok(CpOutcome { accepted: true, trace: Some(extract(&lines, t)) });
        }
        let end = lines.len();
        if fresh_from == end {
            return Ok(CpOutcome { accepted: false, trace: None });
        }
        let mut found: Vec<(LinIneq, Origin)> = Vec::new();
        for b in fresh_from..end {
            for a in 0..=b {
                let s = apply_rule(CpRule::Add(&lines[a].0, &lines[b].0))?;
                if s.within(w, &big_l) {
                    found.push((s, Origin::Add(a, b)));
                }
            }
            let x = &lines[b].0;
            let norm = x.l1_norm();
            for d in 2..=l {
                let dd = BigInt::from(d);
                if &norm * &dd <= big_l && x.sparsity() <= w {
                    let m = apply_rule(CpRule::Multiply(x, &dd))?;
                    found.push((m, Origin::Multiply(b, d as i64)));
                }
                if let Ok(q) = apply_rule(CpRule::Divide(x, &dd)) {
                    if q.within(w, &big_l) {
                        found.push((q, Origin::Divide(b, d as i64)));
                    }
                }
            }
        }
        fresh_from = end;
        for (x, o) in found {
            push(&mut lines, &mut index, x, o);
        }
    }
}

fn extract(lines: &[(LinIneq, Origin)], goal: usize) -> CpTrace {
    let mut steps = Vec::new();
    let mut memo: HashMap<usize, usize> = HashMap::new();
    emit(lines, goal, &mut steps, &mut memo);
    CpTrace { steps }
}

fn emit(
    lines: &[(LinIneq, Origin)],
    i: usize,
    steps: &mut Vec<(CpStep, LinIneq)>,
    memo: &mut HashMap<usize, usize>,
) -> usize {
    if let Some(&s) = memo.get(&i) {
        return s;
    }
    let step = match &lines[i].1 {
        Origin::Axiom(ax) => CpStep::Axiom(*ax),
        Origin::Hyp(h) => CpStep::Hypothesis(*h),
        Origin::Add(a, b) => {
            let sa = emit(lines, *a, steps, memo);
            let sb = emit(lines, *b, steps, memo);
            CpStep::Add(sa, sb)
        }
        Origin::Multiply(a, d) => CpStep::Multiply(emit(lines, *a, steps, memo), BigInt::from(*d)),
        Origin::Divide(a, d) => CpStep::Divide(emit(lines, *a, steps, memo), BigInt::from(*d)),
    };
    steps.push((step, lines[i].0.clone()));
    memo.insert(i, steps.len() - 1);
    steps.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ineq(terms: &[(u32, i64)], b: i64) -> LinIneq {
        LinIneq::from_ints(terms, b)
    }

    fn run(hyps: &[LinIneq], target: &LinIneq, n: usize, w: usize, l: u64) -> bool {
        let out = decide_cp(hyps, target, n, w, l).unwrap();
        if out.accepted {
            check_cp_trace(out.trace.as_ref().unwrap(), hyps, target, n, w, &BigInt::from(l))
                .unwrap();
        }
        out.accepted
    }

    #[test]
    fn contradiction_by_one_addition() {
        let hyps = [ineq(&[(1, 1)], 1), ineq(&[(1, -1)], 0)];
        assert!(run(&hyps, &ineq(&[], 1), 1, 1, 2));
    }

    #[test]
    fn trivial_axiom() {
        assert!(run(&[], &ineq(&[], -1), 0, 0, 1));
        assert!(run(&[], &ineq(&[], -1), 3, 2, 5));
    }

    #[test]
    fn unsound_target_rejected() {
        assert!(!run(&[ineq(&[(1, 1)], 0)], &ineq(&[(1, 1)], 1), 1, 1, 2));
    }

    #[test]
    fn division_rounds_up() {
        // 2 x1 >= 1 divides to x1 >= 1
        let hyps = [ineq(&[(1, 2)], 1)];
        assert!(run(&hyps, &ineq(&[(1, 1)], 1), 1, 1, 3));
    }

    #[test]
    fn unit_chain() {
        let hyps = [
            ineq(&[(1, 1)], 1),
            ineq(&[(1, -1), (2, 1)], 0),
            ineq(&[(2, -1), (3, 1)], 0),
            ineq(&[(3, -1)], 0),
        ];
        assert!(run(&hyps, &ineq(&[], 1), 3, 1, 2));
    }

    #[test]
    fn budget_errors() {
        assert!(matches!(
            decide_cp(&[], &ineq(&[(1, 1), (2, 1)], 1), 2, 1, 5),
            Err(Error::Budget(_))
        ));
        assert!(matches!(decide_cp(&[], &ineq(&[(1, 3)], 1), 1, 1, 3), Err(Error::Budget(_))));
    }

    #[test]
    fn checker_rejects_tampering() {
        let hyps = [ineq(&[(1, 1)], 1), ineq(&[(1, -1)], 0)];
        let target = ineq(&[], 1);
        let mut t = decide_cp(&hyps, &target, 1, 1, 2).unwrap().trace.unwrap();
        let l = BigInt::from(2);
        assert!(check_cp_trace(&t, &hyps, &target, 1, 1, &l).is_ok());
        let last = t.steps.len() - 1;
        t.steps[last].1 = ineq(&[], 2);
        assert!(check_cp_trace(&t, &hyps, &target, 1, 1, &l).is_err());
    }
}
