//! Decision procedures against brute-force references.

mod common;

use common::*;
use num_bigint::BigInt;
use rand::Rng;

use pacsem::cutting_planes::{check_cp_trace, decide_cp};
use pacsem::oracle::{entails, sat_solve};
use pacsem::polycalc::{decide_pc, PcMode};
use pacsem::resk::{check_resk_trace, decide_resk_width, KDnf};
use pacsem::resolution::{check_proof, search_space, Clause};

#[test]
fn resk_width_matches_literal_table_algorithm() {
    let mut r = rng(0x5e5c);
    let (mut accepted, mut total) = (0, 0);
    for _ in 0..400 {
        let n = r.random_range(1..=3);
        let k = r.random_range(1..=2);
        let w = r.random_range(1..=2);
        let hyps: Vec<KDnf> = (0..r.random_range(1..=4)).map(|_| random_kdnf(&mut r, n, k, 3)).collect();
        let target = if r.random_bool(0.5) { KDnf::falsum() } else { random_kdnf(&mut r, n, k, w) };
        let out = decide_resk_width(&hyps, &target, k, w).unwrap();
        let expected = naive_resk(&hyps, &target, k, w, n);
        assert_eq!(out.accepted, expected, "hyps {hyps:?} target {target} k={k} w={w}");
        total += 1;
        if out.accepted {
            accepted += 1;
            check_resk_trace(out.trace.as_ref().unwrap(), &hyps, &target, k, w).unwrap();
            let sound = all_points(n)
                .iter()
                .all(|x| !hyps.iter().all(|h| eval_kdnf(h, x)) || eval_kdnf(&target, x));
            assert!(sound, "unsound accept: {hyps:?} |- {target}");
        }
    }
    // both verdicts must be exercised
    assert!(accepted > 40 && accepted < total - 40, "{accepted}/{total}");
}

#[test]
fn resk_soundness_up_to_four_variables() {
    let mut r = rng(44);
    for _ in 0..300 {
        let n = 4;
        let hyps: Vec<KDnf> = (0..r.random_range(1..=5)).map(|_| random_kdnf(&mut r, n, 2, 3)).collect();
        let target = random_kdnf(&mut r, n, 2, 2);
        let out = decide_resk_width(&hyps, &target, 2, 2).unwrap();
        if out.accepted {
            let hf: Vec<_> = hyps.iter().map(KDnf::to_formula).collect();
            assert!(entails(&hf, &target.to_formula(), n).unwrap());
            check_resk_trace(out.trace.as_ref().unwrap(), &hyps, &target, 2, 2).unwrap();
        }
    }
}

#[test]
fn search_space_matches_satisfiability() {
    let mut r = rng(7);
    for _ in 0..300 {
        let n = r.random_range(1..=4);
        let phi = random_cnf(&mut r, n, 8, 3);
        let proof = search_space(&phi, n + 2, &Clause::empty());
        assert_eq!(proof.is_some(), !cnf_sat(&phi), "{phi:?}");
        assert_eq!(sat_solve(&phi).unwrap().is_none(), !cnf_sat(&phi));
        if let Some(p) = proof {
            assert!(check_proof(&p, &phi, &Clause::empty()));
            assert!(p.clause_space() <= n + 2);
        }
    }
}

#[test]
fn search_space_is_monotone_in_space() {
    let mut r = rng(8);
    for _ in 0..200 {
        let n = r.random_range(1..=4);
        let phi = random_cnf(&mut r, n, 6, 3);
        let target = random_clause(&mut r, n, 2);
        let found: Vec<bool> = (1..=4).map(|s| search_space(&phi, s, &target).is_some()).collect();
        assert!(found.windows(2).all(|p| p[0] <= p[1]), "{found:?}");
        for s in 1..=4 {
            if let Some(p) = search_space(&phi, s, &target) {
                assert!(p.clause_space() <= s);
                assert!(check_proof(&p, &phi, &target));
            }
        }
    }
}

#[test]
fn pc_matches_span_closure_in_both_modes() {
    let mut r = rng(606);
    for i in 0..120 {
        let pcr = i % 2 == 1;
        let n = r.random_range(1..=3);
        let d = r.random_range(1..=2);
        let hyps: Vec<_> = (0..r.random_range(1..=3)).map(|_| random_poly(&mut r, n, d, pcr)).collect();
        let q = random_poly(&mut r, n, d, pcr);
        let mode = if pcr { PcMode::Pcr } else { PcMode::Pc };
        let got = decide_pc(&hyps, &q, d, mode).unwrap();
        assert_eq!(got, SpanOracle::new(&hyps, n, d, pcr).contains(&q), "{hyps:?} {q}");
    }
}

#[test]
fn cp_accepts_are_sound() {
    let mut r = rng(31);
    let mut accepted = 0;
    for _ in 0..300 {
        let n = r.random_range(1..=3);
        let hyps: Vec<_> = (0..r.random_range(1..=3)).map(|_| random_ineq(&mut r, n, 2, 2)).collect();
        let w = r.random_range(1..=2);
        let l = r.random_range(1..=4u64);
        let target = random_ineq(&mut r, n, w, 1);
        if !target.within(w, &BigInt::from(l)) {
            continue;
        }
        let out = decide_cp(&hyps, &target, n, w, l).unwrap();
        if out.accepted {
            accepted += 1;
            check_cp_trace(out.trace.as_ref().unwrap(), &hyps, &target, n, w, &BigInt::from(l)).unwrap();
            for x in all_points(n) {
                if hyps.iter().all(|h| eval_ineq(h, &x)) {
                    assert!(eval_ineq(&target, &x), "{hyps:?} |- {target}");
                }
            }
        }
    }
    assert!(accepted > 20);
}
