//! Threshold-basis propositional formulas, partial assignments, witnessed
//! evaluation and restriction.
//!
//! A formula is built from boolean constants, variables, negation and the
//! linear threshold connective `[c1*f1 + ... + ck*fk >= b]` with exact rational
//! weights. AND and OR are the special cases `c_i = 1, b = k` and
//! `c_i = 1, b = 1`.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// A propositional variable `x_i`, indexed from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn new(index: u32) -> Var {
        assert!(index >= 1, "variables are indexed from 1");
        Var(index)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based position in an assignment vector.
    pub fn idx(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_idx(idx: usize) -> Var {
        Var(idx as u32 + 1)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(Var),
    Not(Box<Formula>),
    Threshold(Threshold),
}

/// `[sum_i coeffs[i] * children[i] >= bound]`; never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Threshold {
    coeffs: Vec<Rational>,
    children: Vec<Formula>,
    bound: Rational,
}

impl Threshold {
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn children(&self) -> &[Formula] {
        &self.children
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Formula)> {
        self.coeffs.iter().zip(self.children.iter())
    }
}

/// Witnessed value of a formula under a partial assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessStatus {
    WitnessedTrue,
    WitnessedFalse,
    Unwitnessed,
}

impl Formula {
    pub fn var(index: u32) -> Formula {
        Formula::Var(Var::new(index))
    }

    /// A literal: `x_i` if `positive`, else `!x_i`.
    pub fn lit(index: u32, positive: bool) -> Formula {
        let v = Formula::var(index);
        if positive {
            v
        } else {
            Formula::negate(v)
        }
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn threshold(
        coeffs: Vec<Rational>,
        children: Vec<Formula>,
        bound: Rational,
    ) -> Result<Formula> {
        if children.is_empty() {
            return Err(Error::InvalidFormula("threshold with no children".into()));
        }
        if coeffs.len() != children.len() {
            return Err(Error::InvalidFormula(format!(
                "threshold has {} coefficients for {} children",
                coeffs.len(),
                children.len()
            )));
        }
        Ok(Formula::Threshold(Threshold { coeffs, children, bound }))
    }

    /// k-ary AND; the empty conjunction is `Const(true)`.
    pub fn and(children: Vec<Formula>) -> Formula {
        if children.is_empty() {
            return Formula::Const(true);
        }
        let k = children.len() as i64;
        Formula::Threshold(Threshold {
            coeffs: vec![Rational::one(); children.len()],
            children,
            bound: int(k),
        })
    }

    /// k-ary OR; the empty disjunction is `Const(false)`.
    pub fn or(children: Vec<Formula>) -> Formula {
        if children.is_empty() {
            return Formula::Const(false);
        }
        Formula::Threshold(Threshold {
            coeffs: vec![Rational::one(); children.len()],
            children,
            bound: Rational::one(),
        })
    }

    /// Largest variable index mentioned, 0 for closed formulas.
    pub fn max_var(&self) -> u32 {
        match self {
            Formula::Const(_) => 0,
            Formula::Var(v) => v.get(),
            Formula::Not(f) => f.max_var(),
            Formula::Threshold(t) => t.children.iter().map(Formula::max_var).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::Threshold(t) => 1 + t.children.iter().map(Formula::size).sum::<usize>(),
        }
    }

    fn eval_unchecked(&self, x: &[bool]) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Var(v) => x[v.idx()],
            Formula::Not(f) => !f.eval_unchecked(x),
            Formula::Threshold(t) => {
                let mut sum = Rational::zero();
                for (c, child) in t.terms() {
                    if child.eval_unchecked(x) {
                        sum += c;
                    }
                }
                sum >= t.bound
            }
        }
    }
}

/// Truth value of `phi` under the full assignment `x` (`x[0]` is `x1`).
pub fn evaluate(phi: &Formula, x: &[bool]) -> Result<bool> {
    let max = phi.max_var();
    if max as usize > x.len() {
        return Err(Error::VarOutOfRange { var: max, n: x.len() });
    }
    Ok(phi.eval_unchecked(x))
}

/// Decides a threshold from the witnessed contributions of its children.
/// `known_true` is the total weight of children witnessed true and
/// `open` the weights of unwitnessed children.
fn threshold_status<'a>(
    known_true: &Rational,
    open: impl Iterator<Item = &'a Rational>,
    bound: &Rational,
) -> WitnessStatus {
    let mut lo = known_true.clone();
    let mut hi = known_true.clone();
    for c in open {
        if c.is_negative() {
            lo += c;
        } else {
            hi += c;
        }
    }
    if &lo >= bound {
        WitnessStatus::WitnessedTrue
    } else if &hi < bound {
        WitnessStatus::WitnessedFalse
    } else {
        WitnessStatus::Unwitnessed
    }
}

pub fn witness_status(phi: &Formula, rho: &PartialAssignment) -> WitnessStatus {
    use WitnessStatus::*;
    match phi {
        Formula::Const(true) => WitnessedTrue,
        Formula::Const(false) => WitnessedFalse,
        Formula::Var(v) => match rho.get(*v) {
            Some(true) => WitnessedTrue,
            Some(false) => WitnessedFalse,
            None => Unwitnessed,
        },
        Formula::Not(f) => match witness_status(f, rho) {
            WitnessedTrue => WitnessedFalse,
            WitnessedFalse => WitnessedTrue,
            Unwitnessed => Unwitnessed,
        },
        Formula::Threshold(t) => {
            let mut known_true = Rational::zero();
            let mut open = Vec::new();
            for (c, child) in t.terms() {
                match witness_status(child, rho) {
                    WitnessedTrue => known_true += c,
                    WitnessedFalse => {}
                    Unwitnessed => open.push(c),
                }
            }
            threshold_status(&known_true, open.into_iter(), &t.bound)
        }
    }
}

/// The restriction `phi|rho`. Witnessed subformulas collapse to constants;
/// surviving threshold children keep their order and the bound absorbs the
/// weight of children witnessed true. Variables keep their original indices.
pub fn restrict(phi: &Formula, rho: &PartialAssignment) -> Formula {
    match phi {
        Formula::Const(b) => Formula::Const(*b),
        Formula::Var(v) => match rho.get(*v) {
            Some(b) => Formula::Const(b),
            None => Formula::Var(*v),
        },
        Formula::Not(f) => match restrict(f, rho) {
            Formula::Const(b) => Formula::Const(!b),
            g => Formula::negate(g),
        },
        Formula::Threshold(t) => {
            let mut known_true = Rational::zero();
            let mut coeffs = Vec::new();
            let mut children = Vec::new();
            for (c, child) in t.terms() {
                match restrict(child, rho) {
                    Formula::Const(true) => known_true += c,
                    Formula::Const(false) => {}
                    g => {
                        coeffs.push(c.clone());
                        children.push(g);
                    }
                }
            }
            match threshold_status(&known_true, coeffs.iter(), &t.bound) {
                WitnessStatus::WitnessedTrue => Formula::Const(true),
                WitnessStatus::WitnessedFalse => Formula::Const(false),
                WitnessStatus::Unwitnessed if children.is_empty() => {
                    // unreachable for exact arithmetic, kept total: [0 >= d]
                    Formula::Const((&t.bound - &known_true) <= Rational::zero())
                }
                WitnessStatus::Unwitnessed => Formula::Threshold(Threshold {
                    coeffs,
                    children,
                    bound: &t.bound - &known_true,
                }),
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(true) => write!(f, "T"),
            Formula::Const(false) => write!(f, "F"),
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::Threshold(t) => {
                write!(f, "[")?;
                for (i, (c, child)) in t.terms().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c}*{child}")?;
                }
                write!(f, " >= {}]", t.bound)
            }
        }
    }
}

/// An element of `{0,1,*}^n`; `None` is `*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAssignment(Vec<Option<bool>>);

impl PartialAssignment {
    pub fn new(entries: Vec<Option<bool>>) -> PartialAssignment {
        PartialAssignment(entries)
    }

    pub fn unset(n: usize) -> PartialAssignment {
        PartialAssignment(vec![None; n])
    }

    pub fn from_full(x: &[bool]) -> PartialAssignment {
        PartialAssignment(x.iter().map(|&b| Some(b)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value of `v`, or `None` when masked (or beyond the vector).
    pub fn get(&self, v: Var) -> Option<bool> {
        self.0.get(v.idx()).copied().flatten()
    }

    pub fn set(&mut self, v: Var, value: Option<bool>) {
        self.0[v.idx()] = value;
    }

    pub fn entries(&self) -> &[Option<bool>] {
        &self.0
    }

    pub fn fixed_count(&self) -> usize {
        self.0.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_consistent_with(&self, x: &[bool]) -> bool {
        self.0.len() == x.len() && self.0.iter().zip(x).all(|(e, &b)| e.is_none_or(|v| v == b))
    }

    /// Every full assignment consistent with `self`, masked coordinates
    /// enumerated in lexicographic order.
    pub fn completions(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        let free: Vec<usize> = (0..self.0.len()).filter(|&i| self.0[i].is_none()).collect();
        let count = 1u64 << free.len();
        (0..count).map(move |bits| {
            let mut x: Vec<bool> = self.0.iter().map(|e| e.unwrap_or(false)).collect();
            for (j, &i) in free.iter().enumerate() {
                x[i] = (bits >> (free.len() - 1 - j)) & 1 == 1;
            }
            x
        })
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.0 {
            let c = match e {
                Some(true) => '1',
                Some(false) => '0',
                None => '*',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PartialAssignment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '*' => Ok(None),
                other => Err(format!("unexpected character '{other}'")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(PartialAssignment)
    }
}

/// Combines a partial assignment `sigma` with `tau`, which may only set
/// coordinates that `sigma` leaves masked.
pub fn refine(sigma: &PartialAssignment, tau: &PartialAssignment) -> Result<PartialAssignment> {
    if sigma.len() != tau.len() {
        return Err(Error::LengthMismatch { expected: sigma.len(), got: tau.len() });
    }
    let mut out = Vec::with_capacity(sigma.len());
    for (i, (s, t)) in sigma.0.iter().zip(&tau.0).enumerate() {
        match (s, t) {
            (Some(_), Some(_)) => return Err(Error::RefinementConflict(Var::from_idx(i))),
            (Some(v), None) | (None, Some(v)) => out.push(Some(*v)),
            (None, None) => out.push(None),
        }
    }
    Ok(PartialAssignment(out))
}

/// All of `{0,1}^n` in lexicographic order, `x1` most significant.
pub fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    assert!(n < 64);
    (0..1u64 << n).map(move |bits| (0..n).map(|i| (bits >> (n - 1 - i)) & 1 == 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use WitnessStatus::*;

    fn pa(s: &str) -> PartialAssignment {
        s.parse().unwrap()
    }

    fn clause_x1_nx2_x3() -> Formula {
        Formula::or(vec![Formula::lit(1, true), Formula::lit(2, false), Formula::lit(3, true)])
    }

    #[test]
    fn evaluate_examples() {
        let f = Formula::threshold(
            vec![int(2), int(-3)],
            vec![Formula::var(1), Formula::var(2)],
            int(0),
        )
        .unwrap();
        assert!(!evaluate(&f, &[true, true]).unwrap());
        let and = Formula::and(vec![Formula::var(1), Formula::var(2)]);
        assert!(evaluate(&and, &[true, true]).unwrap());
        assert!(evaluate(&Formula::lit(1, false), &[false]).unwrap());
    }

    #[test]
    fn evaluate_rejects_short_assignment() {
        let f = Formula::var(3);
        assert_eq!(evaluate(&f, &[true]), Err(Error::VarOutOfRange { var: 3, n: 1 }));
    }

    #[test]
    fn threshold_constructor_checks_shape() {
        assert!(Formula::threshold(vec![], vec![], int(0)).is_err());
        assert!(Formula::threshold(vec![int(1)], vec![Formula::var(1), Formula::var(2)], int(0))
            .is_err());
    }

    #[test]
    fn witness_examples() {
        let and = Formula::and(vec![Formula::var(1), Formula::var(2)]);
        assert_eq!(witness_status(&and, &pa("1*")), Unwitnessed);
        // both completions of (1,*) disagree on AND, so it must be unwitnessed
        let vals: Vec<bool> =
            pa("1*").completions().map(|x| evaluate(&and, &x).unwrap()).collect();
        assert_eq!(vals, vec![false, true]);

        assert_eq!(witness_status(&clause_x1_nx2_x3(), &pa("*0*")), WitnessedTrue);
        let single = Formula::threshold(vec![int(1)], vec![Formula::var(1)], int(1)).unwrap();
        assert_eq!(witness_status(&single, &pa("*")), Unwitnessed);
    }

    #[test]
    fn negative_weights_use_min_and_max() {
        // [x1 - x2 >= 1] with x1 = 1 and x2 masked: min completion 0 < 1, max 1 >= 1
        let f = Formula::threshold(
            vec![int(1), int(-1)],
            vec![Formula::var(1), Formula::var(2)],
            int(1),
        )
        .unwrap();
        assert_eq!(witness_status(&f, &pa("1*")), Unwitnessed);
        assert_eq!(witness_status(&f, &pa("0*")), WitnessedFalse);
        // [x1 - x2 >= 0] with x1 = 1 holds for every x2
        let g = Formula::threshold(
            vec![int(1), int(-1)],
            vec![Formula::var(1), Formula::var(2)],
            int(0),
        )
        .unwrap();
        assert_eq!(witness_status(&g, &pa("1*")), WitnessedTrue);
    }

    #[test]
    fn restrict_examples() {
        let c = clause_x1_nx2_x3();
        let expect = Formula::or(vec![Formula::var(1), Formula::var(3)]);
        assert_eq!(restrict(&c, &pa("*1*")), expect);
        assert_eq!(restrict(&c, &pa("*0*")), Formula::Const(true));

        let and = Formula::and(vec![Formula::var(1), Formula::var(2)]);
        let expect = Formula::threshold(vec![int(1)], vec![Formula::var(2)], int(1)).unwrap();
        assert_eq!(restrict(&and, &pa("1*")), expect);
    }

    #[test]
    fn restrict_under_nothing_is_identity() {
        let c = clause_x1_nx2_x3();
        assert_eq!(restrict(&c, &pa("***")), c);
        let n = Formula::negate(Formula::and(vec![Formula::var(1), Formula::var(2)]));
        assert_eq!(restrict(&n, &pa("**")), n);
    }

    #[test]
    fn refine_examples() {
        assert_eq!(refine(&pa("1**"), &pa("*0*")).unwrap(), pa("10*"));
        assert_eq!(refine(&pa("**"), &pa("**")).unwrap(), pa("**"));
        assert_eq!(refine(&pa("0*"), &pa("*1")).unwrap(), pa("01"));
        assert_eq!(refine(&pa("0*"), &pa("1*")), Err(Error::RefinementConflict(Var::new(1))));
        assert!(refine(&pa("0*"), &pa("1")).is_err());
    }

    #[test]
    fn partial_assignment_text_roundtrip() {
        let p = pa("1*0");
        assert_eq!(p.entries(), &[Some(true), None, Some(false)]);
        assert_eq!(p.to_string(), "1*0");
        assert!("1x".parse::<PartialAssignment>().is_err());
    }

    #[test]
    fn completions_are_consistent_and_complete() {
        let p = pa("*1*");
        let all: Vec<Vec<bool>> = p.completions().collect();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|x| p.is_consistent_with(x)));
        assert_eq!(all[0], vec![false, true, false]);
        assert_eq!(all[3], vec![true, true, true]);
    }

    #[test]
    fn assignments_are_lexicographic() {
        let all: Vec<Vec<bool>> = assignments(2).collect();
        assert_eq!(
            all,
            vec![vec![false, false], vec![false, true], vec![true, false], vec![true, true]]
        );
    }
}
