use crate::formula::Var;

use super::clause::{Clause, Cnf, Literal};
use super::proof::Proof;

/// Searches for a treelike proof of `target` from `phi` in clause space at
/// most `s`.
///
/// If `target` contains some input clause the weakening from the first such
/// clause is returned. Otherwise, for `s > 1`, literals `l` not mentioned in
/// the target are tried in ascending variable order, positive first: if
/// `target | l` is provable in space `s - 1` the result hinges on proving
/// `target | !l` in space `s`, and the search stops either way.
pub fn search_space(phi: &Cnf, s: usize, target: &Clause) -> Option<Proof> {
    assert!(s >= 1, "space bound must be at least 1");
    if target.is_tautology() {
        return Some(Proof::leaf(Clause::Tautology));
    }
    search(phi, s, target)
}

fn search(phi: &Cnf, s: usize, c: &Clause) -> Option<Proof> {
    if let Some(found) = phi.clauses().iter().find(|d| d.is_subset_of(c)) {
        let leaf = Proof::leaf(found.clone());
        return Some(if found == c { leaf } else { Proof::weaken(c.clone(), leaf) });
    }
    if s <= 1 {
        return None;
    }
    for i in 1..=phi.num_vars() {
        let v = Var::from_idx(i - 1);
        let x = Literal::new(v, true);
        if c.contains(x) || c.contains(x.negated()) {
            continue;
        }
        for l in [x, x.negated()] {
            if let Some(p1) = search(phi, s - 1, &c.with(l)) {
                let p2 = search(phi, s, &c.with(l.negated()))?;
                return Some(if l.is_positive() {
                    Proof::cut(v, p1, p2)
                } else {
                    Proof::cut(v, p2, p1)
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::proof::check_proof;

    fn c(lits: &[i64]) -> Clause {
        Clause::from_dimacs(lits)
    }

    #[test]
    fn two_unit_refutation() {
        let phi = Cnf::new(1, [c(&[1]), c(&[-1])]).unwrap();
        let p = search_space(&phi, 2, &Clause::empty()).unwrap();
        assert_eq!(p, Proof::cut(Var::new(1), Proof::leaf(c(&[1])), Proof::leaf(c(&[-1]))));
        assert!(check_proof(&p, &phi, &Clause::empty()));
        assert!(search_space(&phi, 1, &Clause::empty()).is_none());
    }

    #[test]
    fn superset_base_case() {
        let phi = Cnf::new(3, [c(&[1, 2])]).unwrap();
        let p = search_space(&phi, 1, &c(&[1, 2, 3])).unwrap();
        assert_eq!(p, Proof::weaken(c(&[1, 2, 3]), Proof::leaf(c(&[1, 2]))));
    }

    #[test]
    fn tautology_target_is_an_axiom() {
        let phi = Cnf::new(1, []).unwrap();
        assert_eq!(search_space(&phi, 1, &Clause::Tautology), Some(Proof::leaf(Clause::Tautology)));
    }

    #[test]
    fn chain_needs_space_two() {
        // x1, x1 -> x2, x2 -> x3, !x3
        let phi = Cnf::new(3, [c(&[1]), c(&[-1, 2]), c(&[-2, 3]), c(&[-3])]).unwrap();
        assert!(search_space(&phi, 1, &Clause::empty()).is_none());
        let p = search_space(&phi, 2, &Clause::empty()).unwrap();
        assert!(check_proof(&p, &phi, &Clause::empty()));
        assert!(p.clause_space() <= 2);
    }

    #[test]
    fn satisfiable_has_no_refutation() {
        let phi = Cnf::new(2, [c(&[1, 2]), c(&[-1])]).unwrap();
        assert!(search_space(&phi, 4, &Clause::empty()).is_none());
    }
}
