use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::formula::{witness_status, Formula, PartialAssignment, Rational, Var, WitnessStatus};
use crate::resolution::Clause;

/// A variable `x_i`, or its dual `~x_i` standing for `1 - x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Indeterminate {
    pub var: Var,
    pub dual: bool,
}

impl Indeterminate {
    pub fn plain(index: u32) -> Self {
        Indeterminate { var: Var::new(index), dual: false }
    }

    pub fn dual(index: u32) -> Self {
        Indeterminate { var: Var::new(index), dual: true }
    }

    /// `2 (i - 1)` for `x_i`, `2 (i - 1) + 1` for `~x_i`.
    pub fn id(self) -> u64 {
        2 * self.var.idx() as u64 + self.dual as u64
    }

    /// Value at a full assignment; duals take the negated value.
    pub fn eval(self, x: &[bool]) -> bool {
        x[self.var.idx()] != self.dual
    }

    pub fn value(self, rho: &PartialAssignment) -> Option<bool> {
        rho.get(self.var).map(|b| b != self.dual)
    }

    fn literal(self) -> Formula {
        Formula::lit(self.var.get(), !self.dual)
    }
}

impl fmt::Display for Indeterminate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dual {
            write!(f, "~")?;
        }
        write!(f, "x{}", self.var.get())
    }
}

/// A product of distinct indeterminates. Monomials order by degree, then
/// lexicographically by indeterminate ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<Indeterminate>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn new(indets: impl IntoIterator<Item = Indeterminate>) -> Monomial {
        let mut v: Vec<Indeterminate> = indets.into_iter().collect();
        v.sort();
        v.dedup();
        Monomial(v)
    }

    pub fn indets(&self) -> &[Indeterminate] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Multilinear product with one indeterminate.
    pub fn times(&self, a: Indeterminate) -> Monomial {
        match self.0.binary_search(&a) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, a);
                Monomial(v)
            }
        }
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        self.0.iter().all(|a| a.eval(x))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multilinear polynomial with exact rational coefficients, read as the
/// equation `p = 0`. No stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial(BTreeMap<Monomial, Rational>);

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial(BTreeMap::new())
    }

    pub fn constant(c: Rational) -> Polynomial {
        Polynomial::from_terms([(Monomial::one(), c)])
    }

    /// Sums the given terms, merging equal monomials.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Polynomial {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial(map)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.0.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The largest monomial and its coefficient.
    pub fn lead(&self) -> Option<(&Monomial, &Rational)> {
        self.0.iter().next_back()
    }

    pub fn degree(&self) -> usize {
        self.lead().map_or(0, |(m, _)| m.degree())
    }

    pub fn has_duals(&self) -> bool {
        self.0.keys().any(|m| m.indets().iter().any(|a| a.dual))
    }

    pub fn max_var(&self) -> u32 {
        self.0.keys().flat_map(|m| m.indets()).map(|a| a.var.get()).max().unwrap_or(0)
    }

    /// Variables occurring, plain or dual.
    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.keys().flat_map(|m| m.indets()).map(|a| a.var)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial(self.0.iter().map(|(m, a)| (m.clone(), a * c)).collect())
    }

    /// `self - c * other`.
    pub fn sub_scaled(&self, c: &Rational, other: &Polynomial) -> Polynomial {
        let mut map = self.0.clone();
        for (m, a) in &other.0 {
            let e = map.entry(m.clone()).or_insert_with(Rational::zero);
            *e -= a * c;
            if e.is_zero() {
                map.remove(m);
            }
        }
        Polynomial(map)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.sub_scaled(&-Rational::one(), other)
    }

    /// Multilinearization of `a * self`.
    pub fn times(&self, a: Indeterminate) -> Polynomial {
        Polynomial::from_terms(self.0.iter().map(|(m, c)| (m.times(a), c.clone())))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.lead() {
            Some((_, c)) => self.scale(&(Rational::one() / c)),
            None => Polynomial::zero(),
        }
    }

    /// Value at a Boolean point, duals bound to negations.
    pub fn eval(&self, x: &[bool]) -> Rational {
        self.0.iter().filter(|(m, _)| m.eval(x)).map(|(_, c)| c.clone()).sum()
    }
}

impl fmt::Display for Polynomial {
    /// Terms in decreasing monomial order, `;`-separated: `1 x1 x2; -1 x1; 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.0.iter().rev().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
            for a in m.indets() {
                write!(f, " {a}")?;
            }
        }
        Ok(())
    }
}

/// Collapses exponents above 1 and merges like monomials. Each term is a
/// coefficient and a list of `(indeterminate, exponent)` factors.
pub fn multilinearize(terms: &[(Rational, Vec<(Indeterminate, u32)>)]) -> Polynomial {
    Polynomial::from_terms(terms.iter().map(|(c, factors)| {
        let m = Monomial::new(factors.iter().filter(|(_, e)| *e > 0).map(|(a, _)| *a));
        (m, c.clone())
    }))
}

/// `p|rho`: monomials with an indeterminate set to 0 vanish, indeterminates
/// set to 1 are deleted. A dual is set exactly when its variable is, to the
/// opposite value.
pub fn restrict_polynomial(p: &Polynomial, rho: &PartialAssignment) -> Polynomial {
    Polynomial::from_terms(p.terms().filter_map(|(m, c)| {
        let mut keep = Vec::with_capacity(m.degree());
        for &a in m.indets() {
            match a.value(rho) {
                Some(false) => return None,
                Some(true) => {}
                None => keep.push(a),
            }
        }
        Some((Monomial(keep), c.clone()))
    }))
}

/// The equation `p = 0` as the conjunction of `[sum c_S m_S >= -c_0]` and
/// `[sum -c_S m_S >= c_0]`, each monomial an AND of its literals. Constant
/// polynomials become `Const`.
pub fn polynomial_formula(p: &Polynomial) -> Formula {
    let c0 = p.coeff(&Monomial::one());
    let (coeffs, children): (Vec<Rational>, Vec<Formula>) = p
        .terms()
        .filter(|(m, _)| !m.is_one())
        .map(|(m, c)| (c.clone(), Formula::and(m.indets().iter().map(|a| a.literal()).collect())))
        .unzip();
    if children.is_empty() {
        return Formula::Const(c0.is_zero());
    }
    let neg: Vec<Rational> = coeffs.iter().map(|c| -c).collect();
    let upper = Formula::threshold(coeffs, children.clone(), -c0.clone()).expect("nonempty");
    let lower = Formula::threshold(neg, children, c0).expect("nonempty");
    Formula::and(vec![upper, lower])
}

/// Witnessed value of `p = 0`, through its threshold encoding.
pub fn poly_witness_status(p: &Polynomial, rho: &PartialAssignment) -> WitnessStatus {
    witness_status(&polynomial_formula(p), rho)
}

/// A clause as a single monomial: the product, over its literals, of the
/// indeterminate for the negated literal. The empty clause is `1`.
pub fn encode_clause_pcr(c: &Clause) -> Result<Polynomial> {
    let lits = c
        .literals()
        .ok_or_else(|| Error::Precondition("the tautology has no monomial encoding".into()))?;
    let m = Monomial::new(
        lits.iter().map(|l| Indeterminate { var: l.var(), dual: l.is_positive() }),
    );
    Ok(Polynomial::from_terms([(m, Rational::one())]))
}
