//! Random instance generators and independent reference implementations
//! shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use pacsem::cutting_planes::LinIneq;
use pacsem::formula::{Formula, PartialAssignment, Rational, Var};
use pacsem::polycalc::{Indeterminate, Monomial, Polynomial};
use pacsem::resk::{KDnf, Term};
use pacsem::resolution::{Clause, Cnf, Literal};

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---- plain enumeration ----

/// All of `{0,1}^n`, x1 most significant.
pub fn all_points(n: usize) -> Vec<Vec<bool>> {
    (0..1u32 << n).map(|b| (0..n).map(|i| (b >> (n - 1 - i)) & 1 == 1).collect()).collect()
}

pub fn completions(rho: &PartialAssignment) -> Vec<Vec<bool>> {
    let free: Vec<usize> = (0..rho.len()).filter(|&i| rho.entries()[i].is_none()).collect();
    all_points(free.len())
        .into_iter()
        .map(|bits| {
            let mut x: Vec<bool> = rho.entries().iter().map(|e| e.unwrap_or(false)).collect();
            for (j, &i) in free.iter().enumerate() {
                x[i] = bits[j];
            }
            x
        })
        .collect()
}

/// Direct recursive evaluation, independent of the library evaluator.
pub fn eval_formula(phi: &Formula, x: &[bool]) -> bool {
    match phi {
        Formula::Const(b) => *b,
        Formula::Var(v) => x[v.get() as usize - 1],
        Formula::Not(g) => !eval_formula(g, x),
        Formula::Threshold(t) => {
            let mut sum = Rational::zero();
            for (c, child) in t.terms() {
                if eval_formula(child, x) {
                    sum += c;
                }
            }
            sum >= *t.bound()
        }
    }
}

pub fn eval_clause(c: &Clause, x: &[bool]) -> bool {
    match c.literals() {
        None => true,
        Some(lits) => lits.iter().any(|l| x[l.var().get() as usize - 1] == l.is_positive()),
    }
}

pub fn cnf_sat(phi: &Cnf) -> bool {
    all_points(phi.num_vars()).iter().any(|x| phi.clauses().iter().all(|c| eval_clause(c, x)))
}

pub fn eval_kdnf(f: &KDnf, x: &[bool]) -> bool {
    match f.terms() {
        None => true,
        Some(ts) => ts
            .iter()
            .any(|t| t.literals().iter().all(|l| x[l.var().get() as usize - 1] == l.is_positive())),
    }
}

pub fn eval_ineq(a: &LinIneq, x: &[bool]) -> bool {
    let lhs: BigInt = a.coeffs().iter().filter(|(v, _)| x[v.get() as usize - 1]).map(|(_, c)| c.clone()).sum();
    &lhs >= a.bound()
}

/// Polynomial value with `~x = 1 - x`.
pub fn eval_poly(p: &Polynomial, x: &[bool]) -> Rational {
    p.terms()
        .filter(|(m, _)| m.indets().iter().all(|a| x[a.var.get() as usize - 1] != a.dual))
        .map(|(_, c)| c.clone())
        .sum()
}

// ---- generators ----

pub fn random_literal(r: &mut TestRng, n: usize) -> Literal {
    Literal::new(Var::new(r.random_range(1..=n as u32)), r.random_bool(0.5))
}

pub fn random_clause(r: &mut TestRng, n: usize, max_width: usize) -> Clause {
    let w = r.random_range(0..=max_width);
    Clause::new((0..w).map(|_| random_literal(r, n)))
}

/// Non-tautological clauses of width 1..=max_width.
pub fn random_cnf(r: &mut TestRng, n: usize, max_clauses: usize, max_width: usize) -> Cnf {
    let m = r.random_range(1..=max_clauses);
    let mut out = Vec::new();
    while out.len() < m {
        let w = r.random_range(1..=max_width.min(n));
        let c = Clause::new((0..w).map(|_| random_literal(r, n)));
        if !c.is_tautology() {
            out.push(c);
        }
    }
    Cnf::new(n, out).unwrap()
}

pub fn random_partial(r: &mut TestRng, n: usize, p_hidden: f64) -> PartialAssignment {
    PartialAssignment::new(
        (0..n).map(|_| if r.random_bool(p_hidden) { None } else { Some(r.random_bool(0.5)) }).collect(),
    )
}

/// Random formula mixing variables, constants, negations and threshold gates
/// with small signed rational weights.
pub fn random_formula(r: &mut TestRng, n: usize, depth: usize) -> Formula {
    let leaf = depth == 0 || r.random_bool(0.25);
    if leaf {
        return if r.random_bool(0.1) {
            Formula::Const(r.random_bool(0.5))
        } else {
            Formula::var(r.random_range(1..=n as u32))
        };
    }
    if r.random_bool(0.2) {
        return Formula::negate(random_formula(r, n, depth - 1));
    }
    let arity = r.random_range(1..=4);
    let children: Vec<Formula> = (0..arity).map(|_| random_formula(r, n, depth - 1)).collect();
    let coeffs: Vec<Rational> = (0..arity)
        .map(|_| Rational::new(BigInt::from(r.random_range(-3..=3)), BigInt::from(r.random_range(1..=2))))
        .collect();
    let bound = Rational::new(BigInt::from(r.random_range(-3..=4)), BigInt::from(r.random_range(1..=2)));
    Formula::threshold(coeffs, children, bound).unwrap()
}

pub fn random_term(r: &mut TestRng, n: usize, k: usize) -> Term {
    loop {
        let size = r.random_range(1..=k.min(n));
        if let Some(t) = Term::new((0..size).map(|_| random_literal(r, n))) {
            return t;
        }
    }
}

pub fn random_kdnf(r: &mut TestRng, n: usize, k: usize, max_width: usize) -> KDnf {
    let w = r.random_range(1..=max_width);
    KDnf::new((0..w).map(|_| random_term(r, n, k)))
}

pub fn random_monomial(r: &mut TestRng, n: usize, max_deg: usize, duals: bool) -> Monomial {
    let deg = r.random_range(0..=max_deg);
    Monomial::new((0..deg).map(|_| Indeterminate {
        var: Var::new(r.random_range(1..=n as u32)),
        dual: duals && r.random_bool(0.5),
    }))
}

pub fn random_poly(r: &mut TestRng, n: usize, max_deg: usize, duals: bool) -> Polynomial {
    let terms = r.random_range(1..=3);
    Polynomial::from_terms((0..terms).map(|_| {
        let c = loop {
            let c = r.random_range(-2i64..=2);
            if c != 0 {
                break c;
            }
        };
        (random_monomial(r, n, max_deg, duals), Rational::from_integer(c.into()))
    }))
}

pub fn random_ineq(r: &mut TestRng, n: usize, max_sparsity: usize, max_coeff: i64) -> LinIneq {
    let s = r.random_range(0..=max_sparsity.min(n));
    let terms: Vec<(Var, BigInt)> = (0..s)
        .map(|_| (Var::new(r.random_range(1..=n as u32)), BigInt::from(r.random_range(-max_coeff..=max_coeff))))
        .collect();
    LinIneq::new(terms, BigInt::from(r.random_range(-max_coeff..=max_coeff)))
}

// ---- brute-force RES(k) ----

/// Every width-`<= w` k-DNF over `n` variables, as sorted term lists.
fn kdnf_universe(n: usize, k: usize, w: usize) -> Vec<Vec<Term>> {
    let mut terms: Vec<Term> = Vec::new();
    let lits: Vec<Literal> =
        (1..=n as u32).flat_map(|i| [Literal::pos(i), Literal::neg(i)]).collect();
    for mask in 1u32..(1 << lits.len()) {
        let chosen: Vec<Literal> =
            (0..lits.len()).filter(|&b| mask >> b & 1 == 1).map(|b| lits[b]).collect();
        if chosen.len() <= k {
            if let Some(t) = Term::new(chosen.iter().copied()) {
                if t.len() == chosen.len() {
                    terms.push(t);
                }
            }
        }
    }
    terms.sort();
    terms.dedup();
    let mut out: Vec<Vec<Term>> = vec![vec![]];
    let mut frontier: Vec<Vec<Term>> = vec![vec![]];
    for _ in 0..w {
        let mut next = Vec::new();
        for f in &frontier {
            let start = f.last().map_or(0, |t| terms.binary_search(t).unwrap() + 1);
            for t in &terms[start..] {
                let mut g = f.clone();
                g.push(t.clone());
                next.push(g);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn set_union(a: &[Term], b: &[Term]) -> Vec<Term> {
    let s: BTreeSet<Term> = a.iter().chain(b).cloned().collect();
    s.into_iter().collect()
}

fn is_subset(a: &[Term], b: &[Term]) -> bool {
    a.iter().all(|t| b.contains(t))
}

/// The table algorithm run literally: weakening to every width-`<= w`
/// superset, elimination, cut and introduction, each round over the whole
/// universe of width-`<= w` k-DNFs. Only meant for `n <= 3`.
pub fn naive_resk(hyps: &[KDnf], target: &KDnf, k: usize, w: usize, n: usize) -> bool {
    let Some(goal) = target.terms() else { return true };
    let universe = kdnf_universe(n, k, w);
    let index: HashMap<Vec<Term>, usize> =
        universe.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    let mut table = vec![false; universe.len()];
    let hyp_terms: Vec<Vec<Term>> = hyps.iter().filter_map(|h| h.terms().map(|t| t.to_vec())).collect();
    for h in &hyp_terms {
        if let Some(&i) = index.get(h) {
            table[i] = true;
        }
    }
    let goal_idx = index[goal];
    loop {
        if table[goal_idx] {
            return true;
        }
        let mut premises: Vec<Vec<Term>> =
            universe.iter().zip(&table).filter(|(_, &on)| on).map(|(f, _)| f.clone()).collect();
        premises.extend(hyp_terms.iter().cloned());
        let mut derived: HashSet<Vec<Term>> = HashSet::new();
        for p in &premises {
            // weakening
            if p.len() <= w {
                for f in &universe {
                    if is_subset(p, f) {
                        derived.insert(f.clone());
                    }
                }
            }
            // and-elimination
            for t in p.iter().filter(|t| t.len() >= 2) {
                let rest: Vec<Term> = p.iter().filter(|s| *s != t).cloned().collect();
                for &l in t.literals() {
                    derived.insert(set_union(&rest, &[Term::unit(l)]));
                }
            }
            // cut against every premise holding all negated literals of a term
            for t in p.iter() {
                let negs: Vec<Term> = t.literals().iter().map(|l| Term::unit(l.negated())).collect();
                let a: Vec<Term> = p.iter().filter(|s| *s != t).cloned().collect();
                for q in &premises {
                    if negs.iter().all(|u| q.contains(u)) {
                        let b: Vec<Term> = q.iter().filter(|s| !negs.contains(s)).cloned().collect();
                        derived.insert(set_union(&a, &b));
                    }
                }
            }
        }
        // and-introduction from table entries A | l_i to A | (l_1 & ... & l_j)
        for a in universe.iter().filter(|a| a.len() < w) {
            for t in universe.iter().filter(|f| f.len() == 1).map(|f| &f[0]) {
                if t.len() < 2 || a.contains(t) {
                    continue;
                }
                let ok = t.literals().iter().all(|&l| {
                    let prem = set_union(a, &[Term::unit(l)]);
                    index.get(&prem).is_some_and(|&i| table[i])
                });
                if ok {
                    derived.insert(set_union(a, std::slice::from_ref(t)));
                }
            }
        }
        let mut grew = false;
        for f in derived {
            if let Some(&i) = index.get(&f) {
                if !table[i] {
                    table[i] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            return false;
        }
    }
}

// ---- dense span closure for polynomial calculus ----

/// Bit `2 (i - 1) + dual` per indeterminate.
type Mono = u32;

fn mono_of(m: &Monomial) -> Mono {
    m.indets().iter().fold(0, |acc, a| acc | 1 << (2 * (a.var.get() - 1) + a.dual as u32))
}

/// Degree-`d` closure of the hypotheses (plus complementarity for every
/// variable in PCR mode) under linear combination and multiplication by
/// every indeterminate of `x1..xn`, kept as a dense echelon form.
pub struct SpanOracle {
    cols: Vec<Mono>,
    col_of: HashMap<Mono, usize>,
    /// Echelon rows keyed by pivot column (the leftmost nonzero).
    rows: Vec<Option<Vec<Rational>>>,
}

impl SpanOracle {
    pub fn new(hyps: &[Polynomial], n: usize, d: usize, pcr: bool) -> SpanOracle {
        let indets: Vec<u32> = (0..n as u32).flat_map(|i| if pcr { vec![2 * i, 2 * i + 1] } else { vec![2 * i] }).collect();
        let mut cols: Vec<Mono> = Vec::new();
        for mask in 0u64..(1u64 << indets.len()) {
            if (mask.count_ones() as usize) <= d {
                cols.push((0..indets.len()).filter(|&b| mask >> b & 1 == 1).fold(0, |acc, b| acc | 1 << indets[b]));
            }
        }
        // graded, largest first: a row's pivot then has the row's degree
        cols.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(b.cmp(a)));
        let col_of = cols.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut o = SpanOracle { rows: vec![None; cols.len()], cols, col_of };
        let mut start: Vec<Vec<Rational>> = hyps.iter().map(|p| o.dense(p)).collect();
        if pcr {
            for i in 0..n as u32 {
                let mut v = vec![Rational::zero(); o.cols.len()];
                v[o.col_of[&(1 << (2 * i))]] = Rational::one();
                v[o.col_of[&(1 << (2 * i + 1))]] = Rational::one();
                v[o.col_of[&0]] = -Rational::one();
                start.push(v);
            }
        }
        for v in start {
            o.insert(v);
        }
        loop {
            let mut products = Vec::new();
            for row in o.rows.iter().flatten() {
                let deg = row.iter().zip(&o.cols).filter(|(c, _)| !c.is_zero()).map(|(_, m)| m.count_ones()).max().unwrap_or(0);
                if (deg as usize) < d {
                    for &a in &indets {
                        products.push(o.times(row, a));
                    }
                }
            }
            let mut grew = false;
            for v in products {
                grew |= o.insert(v);
            }
            if !grew {
                return o;
            }
        }
    }

    fn dense(&self, p: &Polynomial) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.cols.len()];
        for (m, c) in p.terms() {
            v[self.col_of[&mono_of(m)]] += c;
        }
        v
    }

    fn times(&self, row: &[Rational], a: u32) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.cols.len()];
        for (c, &m) in row.iter().zip(&self.cols) {
            if !c.is_zero() {
                v[self.col_of[&(m | 1 << a)]] += c;
            }
        }
        v
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for i in 0..v.len() {
            if v[i].is_zero() {
                continue;
            }
            if let Some(row) = &self.rows[i] {
                let f = v[i].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<Rational>) -> bool {
        let v = self.reduce(v);
        match v.iter().position(|c| !c.is_zero()) {
            None => false,
            Some(p) => {
                let lead = v[p].clone();
                self.rows[p] = Some(v.into_iter().map(|c| c / &lead).collect());
                true
            }
        }
    }

    pub fn contains(&self, q: &Polynomial) -> bool {
        self.reduce(self.dense(q)).iter().all(Zero::is_zero)
    }

    pub fn dimension(&self) -> usize {
        self.rows.iter().flatten().count()
    }
}
