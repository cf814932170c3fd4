use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::formula::{Formula, PartialAssignment, Rational, Var};
use crate::resolution::Clause;

/// `sum c_i x_i >= b` over integers, coefficients sorted by variable and
/// nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinIneq {
    coeffs: Vec<(Var, BigInt)>,
    bound: BigInt,
}

impl LinIneq {
    /// Merges repeated variables and drops zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (Var, BigInt)>, bound: BigInt) -> LinIneq {
        let mut v: Vec<(Var, BigInt)> = terms.into_iter().collect();
        v.sort_by_key(|(x, _)| *x);
        let mut out: Vec<(Var, BigInt)> = Vec::with_capacity(v.len());
        for (x, c) in v {
            match out.last_mut() {
                Some((y, d)) if *y == x => *d += c,
                _ => out.push((x, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LinIneq { coeffs: out, bound }
    }

    /// Convenience constructor from `(index, coefficient)` pairs.
    pub fn from_ints(terms: &[(u32, i64)], bound: i64) -> LinIneq {
        LinIneq::new(terms.iter().map(|&(i, c)| (Var::new(i), BigInt::from(c))), bound.into())
    }

    pub fn coeffs(&self) -> &[(Var, BigInt)] {
        &self.coeffs
    }

    pub fn bound(&self) -> &BigInt {
        &self.bound
    }

    pub fn coeff(&self, v: Var) -> BigInt {
        self.coeffs
            .binary_search_by_key(&v, |(x, _)| *x)
            .map_or_else(|_| BigInt::zero(), |i| self.coeffs[i].1.clone())
    }

    /// Number of variables with a nonzero coefficient.
    pub fn sparsity(&self) -> usize {
        self.coeffs.len()
    }

    /// `|b| + sum |c_i|`.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|(_, c)| c.abs()).sum::<BigInt>() + self.bound.abs()
    }

    pub fn within(&self, w: usize, l: &BigInt) -> bool {
        self.sparsity() <= w && &self.l1_norm() <= l
    }

    pub fn max_var(&self) -> u32 {
        self.coeffs.last().map_or(0, |(v, _)| v.get())
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        let lhs: BigInt =
            self.coeffs.iter().filter(|(v, _)| x[v.idx()]).map(|(_, c)| c.clone()).sum();
        lhs >= self.bound
    }

    /// Holds for every Boolean point.
    pub fn is_tautology(&self) -> bool {
        let min: BigInt = self.coeffs.iter().map(|(_, c)| c.clone().min(BigInt::zero())).sum();
        min >= self.bound
    }

    pub fn to_formula(&self) -> Formula {
        let bound = Rational::from_integer(self.bound.clone());
        if self.coeffs.is_empty() {
            return Formula::Const(bound <= Rational::zero());
        }
        let (cs, vs) = self
            .coeffs
            .iter()
            .map(|(v, c)| (Rational::from_integer(c.clone()), Formula::Var(*v)))
            .unzip();
        Formula::threshold(cs, vs, bound).expect("nonempty")
    }
}

impl fmt::Display for LinIneq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (v, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "x{}:{}", v.get(), c)?;
        }
        write!(f, " >= {}", self.bound)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CpAxiom {
    /// `x >= 0`
    NonNeg(Var),
    /// `-x >= -1`
    AtMostOne(Var),
    /// `0 >= -1`, the encoding of true.
    Trivial,
}

impl CpAxiom {
    pub fn ineq(self) -> LinIneq {
        match self {
            CpAxiom::NonNeg(v) => LinIneq::new([(v, BigInt::one())], BigInt::zero()),
            CpAxiom::AtMostOne(v) => LinIneq::new([(v, -BigInt::one())], -BigInt::one()),
            CpAxiom::Trivial => LinIneq::new([], -BigInt::one()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum CpRule<'a> {
    Add(&'a LinIneq, &'a LinIneq),
    Multiply(&'a LinIneq, &'a BigInt),
    /// Divide every coefficient by `d` and round the bound up.
    Divide(&'a LinIneq, &'a BigInt),
    /// Add an inequality that holds at every Boolean point.
    Weaken(&'a LinIneq, &'a LinIneq),
}

fn add(a: &LinIneq, b: &LinIneq) -> LinIneq {
    LinIneq::new(a.coeffs.iter().chain(&b.coeffs).cloned(), &a.bound + &b.bound)
}

pub fn apply_rule(rule: CpRule<'_>) -> Result<LinIneq> {
    match rule {
        CpRule::Add(a, b) => Ok(add(a, b)),
        CpRule::Multiply(a, d) => {
            if !d.is_positive() {
                return Err(Error::Rule(format!("multiplier {d} is not positive")));
            }
            Ok(LinIneq {
                coeffs: a.coeffs.iter().map(|(v, c)| (*v, c * d)).collect(),
                bound: &a.bound * d,
            })
        }
        CpRule::Divide(a, d) => {
            if !d.is_positive() {
                return Err(Error::Rule(format!("divisor {d} is not positive")));
            }
            if let Some((v, c)) = a.coeffs.iter().find(|(_, c)| !c.is_multiple_of(d)) {
                return Err(Error::Rule(format!("{d} does not divide coefficient {c} of {v}")));
            }
            Ok(LinIneq {
                coeffs: a.coeffs.iter().map(|(v, c)| (*v, c / d)).collect(),
                bound: Integer::div_ceil(&a.bound, d),
            })
        }
        CpRule::Weaken(a, xi) => {
            if !xi.is_tautology() {
                return Err(Error::Rule(format!("weakening term {xi} is not valid")));
            }
            Ok(add(a, xi))
        }
    }
}

/// Result of restricting an inequality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RestrictedIneq {
    True,
    Ineq(LinIneq),
}

/// Variables set to 1 move into the bound and variables set to 0 vanish;
/// the result is `True` when witnessed true.
pub fn restrict_ineq(phi: &LinIneq, rho: &PartialAssignment) -> RestrictedIneq {
    let mut bound = phi.bound.clone();
    let mut coeffs = Vec::new();
    for (v, c) in &phi.coeffs {
        match rho.get(*v) {
            Some(true) => bound -= c,
            Some(false) => {}
            None => coeffs.push((*v, c.clone())),
        }
    }
    let r = LinIneq { coeffs, bound };
    if r.is_tautology() {
        RestrictedIneq::True
    } else {
        RestrictedIneq::Ineq(r)
    }
}

/// `+x` per positive literal, `-x` per negative literal, bound
/// `1 - #negative`.
pub fn encode_clause_cp(c: &Clause) -> Result<LinIneq> {
    let lits = c
        .literals()
        .ok_or_else(|| Error::Precondition("the tautology has no inequality encoding".into()))?;
    let negatives = lits.iter().filter(|l| !l.is_positive()).count() as i64;
    Ok(LinIneq::new(
        lits.iter().map(|l| (l.var(), if l.is_positive() { BigInt::one() } else { -BigInt::one() })),
        BigInt::from(1 - negatives),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ineq(terms: &[(u32, i64)], b: i64) -> LinIneq {
        LinIneq::from_ints(terms, b)
    }

    #[test]
    fn rule_examples() {
        let two = BigInt::from(2);
        let r = apply_rule(CpRule::Divide(&ineq(&[(1, 2), (2, 2)], 1), &two)).unwrap();
        assert_eq!(r, ineq(&[(1, 1), (2, 1)], 1));
        let r = apply_rule(CpRule::Add(&ineq(&[(1, 1)], 1), &ineq(&[(1, -1)], 0))).unwrap();
        assert_eq!(r, ineq(&[], 1));
        let r = apply_rule(CpRule::Multiply(&ineq(&[(1, 1)], 0), &BigInt::from(3))).unwrap();
        assert_eq!(r, ineq(&[(1, 3)], 0));
    }

    #[test]
    fn rule_errors() {
        let a = ineq(&[(1, 3)], 1);
        assert!(apply_rule(CpRule::Divide(&a, &BigInt::from(2))).is_err());
        assert!(apply_rule(CpRule::Divide(&a, &BigInt::from(0))).is_err());
        assert!(apply_rule(CpRule::Multiply(&a, &BigInt::from(-1))).is_err());
        assert!(apply_rule(CpRule::Weaken(&a, &ineq(&[(2, 1)], 1))).is_err());
        let w = apply_rule(CpRule::Weaken(&a, &ineq(&[(2, 1)], 0))).unwrap();
        assert_eq!(w, ineq(&[(1, 3), (2, 1)], 1));
    }

    #[test]
    fn ceiling_division_of_negative_bounds() {
        let r = apply_rule(CpRule::Divide(&ineq(&[(1, -2)], -3), &BigInt::from(2))).unwrap();
        assert_eq!(r, ineq(&[(1, -1)], -1));
    }

    #[test]
    fn norms() {
        let a = ineq(&[(1, 2), (3, -1)], -2);
        assert_eq!(a.sparsity(), 2);
        assert_eq!(a.l1_norm(), BigInt::from(5));
        assert_eq!(a.to_string(), "x1:2 x3:-1 >= -2");
        assert_eq!(CpAxiom::Trivial.ineq().to_string(), "0 >= -1");
    }

    #[test]
    fn restrict_examples() {
        let p = |s: &str| s.parse::<PartialAssignment>().unwrap();
        let a = ineq(&[(1, 2), (2, -1)], 1);
        assert_eq!(restrict_ineq(&a, &p("1*")), RestrictedIneq::True);
        assert_eq!(restrict_ineq(&a, &p("*1")), RestrictedIneq::Ineq(ineq(&[(1, 2)], 2)));
        let b = ineq(&[(1, 1), (2, 1)], 1);
        assert_eq!(restrict_ineq(&b, &p("0*")), RestrictedIneq::Ineq(ineq(&[(2, 1)], 1)));
    }

    #[test]
    fn clause_encoding() {
        let e = |l: &[i64]| encode_clause_cp(&Clause::from_dimacs(l)).unwrap();
        assert_eq!(e(&[1, -2]), ineq(&[(1, 1), (2, -1)], 0));
        assert_eq!(e(&[1]), ineq(&[(1, 1)], 1));
        assert_eq!(e(&[-1]), ineq(&[(1, -1)], 0));
        assert_eq!(e(&[]), ineq(&[], 1));
        assert!(encode_clause_cp(&Clause::Tautology).is_err());
    }
}
