//! Explicit distributions over `{0,1}^n`, masking processes and seeded
//! generation of masked examples.
//!
//! Stream layout for a given seed: a `ChaCha8Rng` seeded with
//! `seed_from_u64(seed)`; each example consumes one `u64` to pick the support
//! point (first point whose cumulative weight exceeds `u / 2^64`), then, for
//! an independent mask only, one `u64` per coordinate in index order (the
//! coordinate is hidden when `u / 2^64 < p`).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{assignments, evaluate, Formula, PartialAssignment, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitDistribution {
    n: usize,
    support: Vec<(Vec<bool>, Rational)>,
}

impl ExplicitDistribution {
    pub fn new(n: usize, support: Vec<(Vec<bool>, Rational)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let mut seen = BTreeSet::new();
        let mut total = Rational::zero();
        for (x, w) in &support {
            if x.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: x.len() });
            }
            if !w.is_positive() {
                return Err(Error::InvalidDistribution(format!("non-positive weight {w}")));
            }
            if !seen.insert(x.clone()) {
                return Err(Error::InvalidDistribution("repeated support point".into()));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
        }
        Ok(ExplicitDistribution { n, support })
    }

    /// Uniform distribution over the given distinct points.
    pub fn uniform(n: usize, points: Vec<Vec<bool>>) -> Result<Self> {
        let w = Rational::new(BigInt::one(), BigInt::from(points.len().max(1)));
        Self::new(n, points.into_iter().map(|x| (x, w.clone())).collect())
    }

    pub fn point_mass(x: Vec<bool>) -> Self {
        ExplicitDistribution { n: x.len(), support: vec![(x, Rational::one())] }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[(Vec<bool>, Rational)] {
        &self.support
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaskSpec {
    /// Always hide the same variables.
    Fixed(BTreeSet<Var>),
    /// Hide each coordinate independently with the given probability.
    Independent(Rational),
    /// Hidden set chosen by the underlying assignment.
    Table(BTreeMap<Vec<bool>, BTreeSet<Var>>),
}

impl MaskSpec {
    /// Checks the mask against a distribution: variables in range,
    /// probabilities in `[0,1]`, tables total on the support.
    pub fn validate(&self, dist: &ExplicitDistribution) -> Result<()> {
        let n = dist.num_vars();
        let check_vars = |set: &BTreeSet<Var>| {
            match set.iter().find(|v| v.idx() >= n) {
                Some(v) => Err(Error::VarOutOfRange { var: v.get(), n }),
                None => Ok(()),
            }
        };
        match self {
            MaskSpec::Fixed(hidden) => check_vars(hidden),
            MaskSpec::Independent(p) => {
                if p.is_negative() || p > &Rational::one() {
                    Err(Error::InvalidMask(format!("hide probability {p} outside [0,1]")))
                } else {
                    Ok(())
                }
            }
            MaskSpec::Table(rule) => {
                for (x, _) in dist.support() {
                    match rule.get(x) {
                        Some(hidden) => check_vars(hidden)?,
                        None => {
                            return Err(Error::InvalidMask(format!(
                                "no table entry for support point {}",
                                PartialAssignment::from_full(x)
                            )))
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

fn hide(x: &[bool], hidden: &BTreeSet<Var>) -> PartialAssignment {
    PartialAssignment::new(
        x.iter()
            .enumerate()
            .map(|(i, &b)| if hidden.contains(&Var::from_idx(i)) { None } else { Some(b) })
            .collect(),
    )
}

/// `u / 2^64 < r`, exactly.
fn below(u: u64, r: &Rational) -> bool {
    let lhs = BigInt::from(u) * r.denom();
    let rhs = r.numer() << 64;
    lhs < rhs
}

/// Draws `m` masked examples, also returning the assignment each was drawn from.
pub fn draw_masked_examples_with_sources(
    dist: &ExplicitDistribution,
    mask: &MaskSpec,
    m: usize,
    seed: u64,
) -> Result<Vec<(Vec<bool>, PartialAssignment)>> {
    if m == 0 {
        return Err(Error::Precondition("sample count must be at least 1".into()));
    }
    mask.validate(dist)?;
    let mut cumulative = Vec::with_capacity(dist.support.len());
    let mut acc = Rational::zero();
    for (_, w) in &dist.support {
        acc += w;
        cumulative.push(acc.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        let u = rng.next_u64();
        let pick = cumulative.iter().position(|c| below(u, c)).unwrap_or(cumulative.len() - 1);
        let x = dist.support[pick].0.clone();
        let rho = match mask {
            MaskSpec::Fixed(hidden) => hide(&x, hidden),
            MaskSpec::Table(rule) => hide(&x, &rule[&x]),
            MaskSpec::Independent(p) => PartialAssignment::new(
                x.iter().map(|&b| if below(rng.next_u64(), p) { None } else { Some(b) }).collect(),
            ),
        };
        out.push((x, rho));
    }
    Ok(out)
}

pub fn draw_masked_examples(
    dist: &ExplicitDistribution,
    mask: &MaskSpec,
    m: usize,
    seed: u64,
) -> Result<Vec<PartialAssignment>> {
    Ok(draw_masked_examples_with_sources(dist, mask, m, seed)?
        .into_iter()
        .map(|(_, rho)| rho)
        .collect())
}

/// Exact probability that `phi` holds under `dist`.
pub fn validity(dist: &ExplicitDistribution, phi: &Formula) -> Result<Rational> {
    let mut total = Rational::zero();
    for (x, w) in &dist.support {
        if evaluate(phi, x)? {
            total += w;
        }
    }
    Ok(total)
}

/// Builds a distribution on which each `psis[i]` is exactly
/// `(1 - epsilons[i])`-valid while their conjunction is exactly
/// `(1 - sum epsilons)`-valid. Witness points are the lexicographically first
/// assignments with the required pattern; zero weights are left out.
pub fn tight_union_bound_distribution(
    psis: &[Formula],
    epsilons: &[Rational],
    n: usize,
    cap: usize,
) -> Result<ExplicitDistribution> {
    if psis.len() != epsilons.len() {
        return Err(Error::LengthMismatch { expected: psis.len(), got: epsilons.len() });
    }
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    if let Some(e) = epsilons.iter().find(|e| e.is_negative()) {
        return Err(Error::Precondition(format!("negative epsilon {e}")));
    }
    let total: Rational = epsilons.iter().sum();
    if total >= Rational::one() {
        return Err(Error::Precondition(format!("epsilons sum to {total}, need < 1")));
    }
    for psi in psis {
        if psi.max_var() as usize > n {
            return Err(Error::VarOutOfRange { var: psi.max_var(), n });
        }
    }

    let values: Vec<(Vec<bool>, Vec<bool>)> = assignments(n)
        .map(|x| {
            let vals = psis.iter().map(|p| evaluate(p, &x).expect("range checked")).collect();
            (x, vals)
        })
        .collect();

    let common = values
        .iter()
        .find(|(_, v)| v.iter().all(|&b| b))
        .ok_or_else(|| Error::Precondition("formulas have no common satisfying point".into()))?;

    let mut weights: BTreeMap<Vec<bool>, Rational> = BTreeMap::new();
    for (i, eps) in epsilons.iter().enumerate() {
        let (x, _) = values
            .iter()
            .find(|(_, v)| v.iter().enumerate().all(|(j, &b)| b == (j != i)))
            .ok_or_else(|| {
                Error::Precondition(format!("the other formulas entail formula {}", i + 1))
            })?;
        if !eps.is_zero() {
            *weights.entry(x.clone()).or_insert_with(Rational::zero) += eps;
        }
    }
    let rest = Rational::one() - total;
    *weights.entry(common.0.clone()).or_insert_with(Rational::zero) += rest;
    ExplicitDistribution::new(n, weights.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::rat;

    fn fixed(hidden: &[u32]) -> MaskSpec {
        MaskSpec::Fixed(hidden.iter().map(|&i| Var::new(i)).collect())
    }

    fn pa(s: &str) -> PartialAssignment {
        s.parse().unwrap()
    }

    #[test]
    fn point_mass_with_fixed_mask() {
        let d = ExplicitDistribution::point_mass(vec![true, true]);
        let ex = draw_masked_examples(&d, &fixed(&[2]), 3, 7).unwrap();
        assert_eq!(ex, vec![pa("1*"); 3]);
    }

    #[test]
    fn independent_mask_zero_hides_nothing() {
        let d = ExplicitDistribution::point_mass(vec![false]);
        let ex = draw_masked_examples(&d, &MaskSpec::Independent(rat(0, 1)), 1, 0).unwrap();
        assert_eq!(ex, vec![pa("0")]);
    }

    #[test]
    fn everything_hidden() {
        let d = ExplicitDistribution::uniform(2, vec![vec![false, false], vec![true, true]])
            .unwrap();
        let ex = draw_masked_examples(&d, &fixed(&[1, 2]), 2, 3).unwrap();
        assert_eq!(ex, vec![pa("**"); 2]);
    }

    #[test]
    fn zero_samples_rejected() {
        let d = ExplicitDistribution::point_mass(vec![true]);
        assert!(draw_masked_examples(&d, &fixed(&[]), 0, 0).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(ExplicitDistribution::new(1, vec![]).is_err());
        assert!(ExplicitDistribution::new(1, vec![(vec![true], rat(1, 2))]).is_err());
        assert!(ExplicitDistribution::new(
            1,
            vec![(vec![true], rat(1, 2)), (vec![true], rat(1, 2))]
        )
        .is_err());
        assert!(ExplicitDistribution::new(
            1,
            vec![(vec![true], rat(3, 2)), (vec![false], rat(-1, 2))]
        )
        .is_err());
    }

    #[test]
    fn table_mask_must_cover_support() {
        let d = ExplicitDistribution::uniform(1, vec![vec![false], vec![true]]).unwrap();
        let mut rule = BTreeMap::new();
        rule.insert(vec![true], BTreeSet::new());
        assert!(draw_masked_examples(&d, &MaskSpec::Table(rule), 1, 0).is_err());
    }

    #[test]
    fn validity_examples() {
        let d = ExplicitDistribution::uniform(2, vec![vec![false, false], vec![true, true]])
            .unwrap();
        let c = Formula::or(vec![Formula::lit(1, true), Formula::lit(2, false)]);
        assert_eq!(validity(&d, &c).unwrap(), rat(1, 1));

        let all = ExplicitDistribution::uniform(2, assignments(2).collect()).unwrap();
        let and = Formula::and(vec![Formula::var(1), Formula::var(2)]);
        assert_eq!(validity(&all, &and).unwrap(), rat(1, 4));
        assert_eq!(validity(&all, &Formula::Const(true)).unwrap(), rat(1, 1));
    }

    #[test]
    fn tight_distribution_two_literals() {
        let psis = vec![Formula::var(1), Formula::var(2)];
        let d = tight_union_bound_distribution(&psis, &[rat(1, 4), rat(1, 4)], 2, 20).unwrap();
        assert_eq!(
            d.support(),
            &[
                (vec![false, true], rat(1, 4)),
                (vec![true, false], rat(1, 4)),
                (vec![true, true], rat(1, 2)),
            ]
        );
        let both = Formula::and(psis);
        assert_eq!(validity(&d, &both).unwrap(), rat(1, 2));
    }

    #[test]
    fn tight_distribution_single_formula() {
        let d = tight_union_bound_distribution(&[Formula::var(1)], &[rat(1, 3)], 1, 20).unwrap();
        assert_eq!(d.support(), &[(vec![false], rat(1, 3)), (vec![true], rat(2, 3))]);
    }

    #[test]
    fn tight_distribution_preconditions() {
        // x1 entails (x1 or x2), so no point satisfies the first and falsifies the second
        let psis = vec![Formula::var(1), Formula::or(vec![Formula::var(1), Formula::var(2)])];
        let err = tight_union_bound_distribution(&psis, &[rat(1, 4), rat(1, 4)], 2, 20);
        assert!(matches!(err, Err(Error::Precondition(_))));
        let err = tight_union_bound_distribution(&[Formula::var(1)], &[rat(1, 1)], 1, 20);
        assert!(matches!(err, Err(Error::Precondition(_))));
        let err = tight_union_bound_distribution(&[Formula::var(1)], &[rat(1, 2)], 30, 20);
        assert!(matches!(err, Err(Error::EnumerationCap { .. })));
        let contra = vec![Formula::var(1), Formula::lit(1, false)];
        let err = tight_union_bound_distribution(&contra, &[rat(1, 4), rat(1, 4)], 1, 20);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }
}
