//! The DecidePAC driver: run a bounded proof search on the instance
//! restricted by each masked example and accept while the number of failed
//! searches stays within `floor(eps * m)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::cutting_planes::{decide_cp, restrict_ineq, LinIneq, RestrictedIneq};
use crate::error::{Error, Result};
use crate::formula::{restrict, Formula, PartialAssignment, Rational};
use crate::oracle::Oracle;
use crate::polycalc::{decide_pc, restrict_polynomial, PcMode, Polynomial};
use crate::resk::{decide_resk_width, negate_query, restrict_kdnf, KDnf};
use crate::resolution::{search_space, Clause, Cnf};
use crate::sampling::{draw_masked_examples, ExplicitDistribution, MaskSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacParams {
    epsilon: Rational,
    gamma: Rational,
    delta: Rational,
}

impl PacParams {
    /// Requires `0 < eps, gamma, delta < 1`, `eps + gamma <= 1` and
    /// `eps >= gamma`.
    pub fn new(epsilon: Rational, gamma: Rational, delta: Rational) -> Result<PacParams> {
        for (name, v) in [("epsilon", &epsilon), ("gamma", &gamma), ("delta", &delta)] {
            if !v.is_positive() || v >= &Rational::one() {
                return Err(Error::Params(format!("{name} = {v} is not in (0, 1)")));
            }
        }
        if &epsilon + &gamma > Rational::one() {
            return Err(Error::Params(format!("epsilon + gamma = {} exceeds 1", &epsilon + &gamma)));
        }
        if epsilon < gamma {
            return Err(Error::Params(format!("epsilon {epsilon} is below gamma {gamma}")));
        }
        Ok(PacParams { epsilon, gamma, delta })
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    /// `floor(eps * m)`, exactly.
    pub fn failure_budget(&self, m: usize) -> u64 {
        let x = &self.epsilon * Rational::from_integer(BigInt::from(m));
        x.numer().div_floor(x.denom()).to_u64().expect("budget fits in u64")
    }

    pub fn sample_size(&self) -> Result<usize> {
        required_sample_size(
            self.gamma.to_f64().expect("finite"),
            self.delta.to_f64().expect("finite"),
        )
    }
}

/// `ceil(ln(1/delta) / (2 gamma^2))`.
pub fn required_sample_size(gamma: f64, delta: f64) -> Result<usize> {
    if !(gamma > 0.0 && gamma < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Params(format!("gamma = {gamma}, delta = {delta} must lie in (0, 1)")));
    }
    let m = (1.0 / delta).ln() / (2.0 * gamma * gamma);
    Ok(m.ceil() as usize)
}

/// A decision procedure for a restriction-closed class of proofs, with the
/// restriction maps for its inputs.
pub trait DecisionBackend: Sync {
    type Query: Sync + Send;
    type Hyps: Sync + Send;

    fn restrict_query(&self, q: &Self::Query, rho: &PartialAssignment) -> Self::Query;
    fn restrict_hyps(&self, h: &Self::Hyps, rho: &PartialAssignment) -> Self::Hyps;
    /// `true` to accept.
    fn decide(&self, q: &Self::Query, h: &Self::Hyps) -> Result<bool>;
}

/// Treelike resolution in clause space `s`; the query is a clause.
#[derive(Debug, Clone, Copy)]
pub struct ResSpace {
    pub s: usize,
}

impl DecisionBackend for ResSpace {
    type Query = Clause;
    type Hyps = Cnf;

    fn restrict_query(&self, q: &Clause, rho: &PartialAssignment) -> Clause {
        q.restrict(rho)
    }

    fn restrict_hyps(&self, h: &Cnf, rho: &PartialAssignment) -> Cnf {
        h.restrict(rho)
    }

    fn decide(&self, q: &Clause, h: &Cnf) -> Result<bool> {
        if q.is_tautology() {
            return Ok(true);
        }
        Ok(search_space(h, self.s, q).is_some())
    }
}

/// Width-`w` RES(k) refutation of the knowledge base together with the
/// negated query. The query is a disjunction of k-CNFs.
#[derive(Debug, Clone, Copy)]
pub struct ResKWidth {
    pub k: usize,
    pub w: usize,
}

impl DecisionBackend for ResKWidth {
    type Query = Vec<Cnf>;
    type Hyps = Vec<KDnf>;

    fn restrict_query(&self, q: &Vec<Cnf>, rho: &PartialAssignment) -> Vec<Cnf> {
        q.iter().map(|c| c.restrict(rho)).collect()
    }

    fn restrict_hyps(&self, h: &Vec<KDnf>, rho: &PartialAssignment) -> Vec<KDnf> {
        h.iter().map(|f| restrict_kdnf(f, rho)).filter(|f| !f.is_true()).collect()
    }

    fn decide(&self, q: &Vec<Cnf>, h: &Vec<KDnf>) -> Result<bool> {
        let mut hyps = h.clone();
        hyps.extend(negate_query(q, self.k)?);
        Ok(decide_resk_width(&hyps, &KDnf::falsum(), self.k, self.w)?.accepted)
    }
}

/// Degree-`d` polynomial calculus, with or without dual indeterminates.
#[derive(Debug, Clone, Copy)]
pub struct Pc {
    pub d: usize,
    pub mode: PcMode,
}

impl DecisionBackend for Pc {
    type Query = Polynomial;
    type Hyps = Vec<Polynomial>;

    fn restrict_query(&self, q: &Polynomial, rho: &PartialAssignment) -> Polynomial {
        restrict_polynomial(q, rho)
    }

    fn restrict_hyps(&self, h: &Vec<Polynomial>, rho: &PartialAssignment) -> Vec<Polynomial> {
        h.iter().map(|p| restrict_polynomial(p, rho)).filter(|p| !p.is_zero()).collect()
    }

    fn decide(&self, q: &Polynomial, h: &Vec<Polynomial>) -> Result<bool> {
        decide_pc(h, q, self.d, self.mode)
    }
}

/// `w`-sparse cutting planes with l1-norm bound `l` over `num_vars` variables.
#[derive(Debug, Clone, Copy)]
pub struct Cp {
    pub num_vars: usize,
    pub w: usize,
    pub l: u64,
}

impl DecisionBackend for Cp {
    type Query = RestrictedIneq;
    type Hyps = Vec<LinIneq>;

    fn restrict_query(&self, q: &RestrictedIneq, rho: &PartialAssignment) -> RestrictedIneq {
        match q {
            RestrictedIneq::True => RestrictedIneq::True,
            RestrictedIneq::Ineq(x) => restrict_ineq(x, rho),
        }
    }

    fn restrict_hyps(&self, h: &Vec<LinIneq>, rho: &PartialAssignment) -> Vec<LinIneq> {
        h.iter()
            .filter_map(|x| match restrict_ineq(x, rho) {
                RestrictedIneq::True => None,
                RestrictedIneq::Ineq(r) => Some(r),
            })
            .collect()
    }

    fn decide(&self, q: &RestrictedIneq, h: &Vec<LinIneq>) -> Result<bool> {
        match q {
            RestrictedIneq::True => Ok(true),
            RestrictedIneq::Ineq(t) => Ok(decide_cp(h, t, self.num_vars, self.w, self.l)?.accepted),
        }
    }
}

/// Classical entailment by enumeration; accepts whenever the restricted
/// knowledge base entails the restricted query.
#[derive(Debug, Clone, Copy)]
pub struct OracleBackend {
    pub num_vars: usize,
    pub oracle: Oracle,
}

impl DecisionBackend for OracleBackend {
    type Query = Formula;
    type Hyps = Vec<Formula>;

    fn restrict_query(&self, q: &Formula, rho: &PartialAssignment) -> Formula {
        restrict(q, rho)
    }

    fn restrict_hyps(&self, h: &Vec<Formula>, rho: &PartialAssignment) -> Vec<Formula> {
        h.iter().map(|f| restrict(f, rho)).collect()
    }

    fn decide(&self, q: &Formula, h: &Vec<Formula>) -> Result<bool> {
        self.oracle.entails(h, q, self.num_vars)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacOutcome {
    pub verdict: Verdict,
    /// Failures counted up to the point the scan stopped.
    pub failed_count: u64,
    pub budget: u64,
    pub m: usize,
    /// Examples scanned before the verdict was fixed (`m` unless rejected
    /// early).
    pub examples_checked: usize,
    /// Backend verdict for every example, when requested.
    pub per_example: Option<Vec<bool>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PacOptions {
    /// Worker threads for per-example calls; `None` runs sequentially.
    pub threads: Option<usize>,
    /// Decide every example and report all verdicts.
    pub per_example: bool,
}

pub struct PacInstance<Q, H> {
    pub num_vars: usize,
    pub query: Q,
    pub hyps: H,
}

fn run_one<B: DecisionBackend>(
    backend: &B,
    inst: &PacInstance<B::Query, B::Hyps>,
    rho: &PartialAssignment,
) -> Result<bool> {
    let q = backend.restrict_query(&inst.query, rho);
    let h = backend.restrict_hyps(&inst.hyps, rho);
    backend.decide(&q, &h)
}

/// Runs the backend on each restricted instance and rejects as soon as more
/// than `floor(eps * m)` calls have failed.
///
/// With several threads all examples are decided concurrently and the same
/// in-order scan is applied afterwards, so the outcome never depends on the
/// thread count.
pub fn decide_pac<B: DecisionBackend>(
    backend: &B,
    inst: &PacInstance<B::Query, B::Hyps>,
    params: &PacParams,
    examples: &[PartialAssignment],
    opts: PacOptions,
) -> Result<PacOutcome> {
    let m = examples.len();
    if m == 0 {
        return Err(Error::Precondition("at least one example is required".into()));
    }
    if let Some(rho) = examples.iter().find(|r| r.len() != inst.num_vars) {
        return Err(Error::LengthMismatch { expected: inst.num_vars, got: rho.len() });
    }
    let budget = params.failure_budget(m);

    let verdicts: Option<Vec<bool>> = match opts.threads {
        Some(t) if t > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Params(format!("thread pool: {e}")))?;
            let v = pool.install(|| {
                examples.par_iter().map(|rho| run_one(backend, inst, rho)).collect::<Result<Vec<_>>>()
            })?;
            Some(v)
        }
        _ if opts.per_example => {
            Some(examples.iter().map(|rho| run_one(backend, inst, rho)).collect::<Result<Vec<_>>>()?)
        }
        _ => None,
    };

    let mut failed = 0u64;
    let mut checked = 0usize;
    let mut verdict = Verdict::Accept;
    for (i, rho) in examples.iter().enumerate() {
        let ok = match &verdicts {
            Some(v) => v[i],
            None => run_one(backend, inst, rho)?,
        };
        checked = i + 1;
        if !ok {
            failed += 1;
            if failed > budget {
                verdict = Verdict::Reject;
                break;
            }
        }
    }
    Ok(PacOutcome {
        verdict,
        failed_count: failed,
        budget,
        m,
        examples_checked: checked,
        per_example: if opts.per_example { verdicts } else { None },
    })
}

/// Draws `m` examples from `(dist, mask, seed)` and runs [`decide_pac`].
#[allow(clippy::too_many_arguments)]
pub fn decide_pac_sampled<B: DecisionBackend>(
    backend: &B,
    inst: &PacInstance<B::Query, B::Hyps>,
    params: &PacParams,
    dist: &ExplicitDistribution,
    mask: &MaskSpec,
    m: usize,
    seed: u64,
    opts: PacOptions,
) -> Result<PacOutcome> {
    let examples = draw_masked_examples(dist, mask, m, seed)?;
    decide_pac(backend, inst, params, &examples, opts)
}

impl PacOutcome {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }
}
