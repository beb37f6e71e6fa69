use super::grammar::{literals, Candidate};
use super::*;
use crate::creal::{cmp_at, Comparison};
use crate::rational::{self, ratio};
use alloc::string::ToString;
use alloc::vec::Vec;
use proptest::prelude::*;

fn at(id: &str) -> DCompResult {
    dcomp(id, DEFAULT_BUDGET).unwrap()
}

#[test]
fn rationals_resolve_at_level_zero() {
    let r = at("r_4_3");
    assert_eq!((r.level, r.witness.as_str(), r.status), (0, "rational 4/3", Status::Exact));
    assert_eq!(at("3/4").witness, "rational 3/4");
    assert_eq!(at("sum_evens").witness, "rational 2/3");
}

#[test]
fn computable_constants_resolve_at_level_one() {
    let r = at("sqrt2");
    assert_eq!((r.level, r.witness.as_str(), r.status), (1, "heron", Status::Exact));
    let r = at("pi");
    assert_eq!(
        (r.level, r.witness.as_str(), r.status),
        (1, "leibniz-series+alt-tail-modulus", Status::Exact)
    );
    assert_eq!(at("e").witness, "e-series");
    assert_eq!(at("ackermann").witness, "ackermann-series");
    let r = at("sin_sqrt2_over_6");
    assert_eq!(
        (r.level, r.witness.as_str(), r.status),
        (1, "sin-taylor(scale(1/6,heron))", Status::Exact)
    );
}

#[test]
fn limit_reals_are_upper_bounds() {
    for (id, level, sigma) in [
        ("witness_real_1", 2, "jump-sum(1)"),
        ("witness_real_2", 3, "jump-sum(2)"),
        ("specker", 2, "jump-sum(1)"),
        ("sum_halting", 2, "jump-sum(1)"),
    ] {
        let r = at(id);
        assert_eq!((r.level, r.witness.as_str(), r.status), (level, sigma, Status::UpperBound), "{id}");
    }
}

#[test]
fn errors() {
    assert!(matches!(dcomp("tau", 10), Err(DCompError::UnknownId(_))));
    assert!(matches!(dcomp("hamel_basis", 10), Err(DCompError::Excluded(..))));
    // too small to reach any hit
    assert!(matches!(dcomp("sqrt2", 2), Err(DCompError::Unresolved { budget_used: 10 })));
}

#[test]
fn small_budget_degrades_to_upper_bound() {
    // level 0 is not exhausted, so the level-1 hit is not certified
    let r = dcomp("sqrt2", 5_000).unwrap();
    assert_eq!((r.level, r.witness.as_str(), r.status), (1, "heron", Status::UpperBound));
}

#[test]
fn delta_membership_examples() {
    assert_eq!(delta_membership("sqrt2", 1, DEFAULT_BUDGET).unwrap().0, Membership::True);
    assert_eq!(delta_membership("sqrt2", 0, DEFAULT_BUDGET).unwrap().0, Membership::False);
    let (m, cert) = delta_membership("witness_real_1", 1, DEFAULT_BUDGET).unwrap();
    assert_eq!(m, Membership::Unconfirmed);
    assert_eq!(cert.status, Status::UpperBound);
    assert_eq!(delta_membership("witness_real_1", 3, DEFAULT_BUDGET).unwrap().0, Membership::False);
}

#[test]
fn layer_table_buckets() {
    let t = layer_table(Ladder::standard(), DEFAULT_BUDGET);
    let ids = |n| t.bucket(n).iter().map(|r| r.id).collect::<Vec<_>>();
    for id in ["r_4_3", "1", "3/4"] {
        assert!(ids(0).contains(&id), "{id}");
    }
    for id in ["sqrt2", "pi", "e"] {
        assert!(ids(1).contains(&id), "{id}");
    }
    assert!(ids(2).contains(&"witness_real_1"));
    assert!(t.rows.iter().all(|r| r.flag.is_none()));
    assert!(t.excluded.iter().any(|(id, why)| *id == "hamel_basis" && why.contains("no chain")));
    assert_eq!(t.max_level(), Some(3));
}

#[test]
fn lowered_declaration_is_flagged() {
    let mut e = *lookup("sqrt2").unwrap();
    e.declared_level = 0;
    let d = fractal_degree(&e.target().unwrap(), Ladder::standard(), DEFAULT_BUDGET).unwrap();
    assert!(e.declared_level < d.level);
}

// independent of the search: every level-0 descriptor is rigorously
// separated from each exact level-1 entry
#[test]
fn exact_results_are_minimal() {
    for id in ["sqrt2", "pi", "e", "sin_sqrt2_over_6", "ackermann"] {
        let r = at(id);
        assert_eq!(r.status, Status::Exact);
        // same verdict as cmp_at at 64 bits against a constant
        let a = lookup(id).unwrap().real().unwrap().approximant(66);
        for q in 1..=100i64 {
            for p in -100..=100i64 {
                assert!(!rational::within(&a, &ratio(p, q), 64), "{id} vs {p}/{q}");
            }
        }
    }
}

#[test]
fn replayed_witnesses_match_catalog() {
    for e in catalog() {
        let r = at(e.id);
        match (replay(&r.witness).unwrap(), e.constructor) {
            (Replayed::Rational(q), Constructor::Constructive(f)) => {
                assert!(rational::within(&q, &f().approximant(22), 20), "{}", e.id);
            }
            (Replayed::Constructive(x), Constructor::Constructive(f)) => {
                assert!(matches!(cmp_at(&x, &f(), 20), Comparison::Indistinguishable(_)), "{}", e.id);
            }
            (Replayed::Limit(x), Constructor::Limit(f)) => {
                let y = f();
                for s in [64, 128, 256] {
                    assert!(rational::within(&x.stage_approximant(s), &y.stage_approximant(s), 20), "{}", e.id);
                }
            }
            (other, _) => panic!("{}: {other:?}", e.id),
        }
    }
}

#[test]
fn oracle_sum_of_total_program() {
    // [INC 0, HALT] accepts every input
    let Replayed::Limit(x) = replay("oracle-sum(1,5)").unwrap() else {
        panic!()
    };
    // two steps per run, so nothing is accepted at stage 1
    assert_eq!(x.stage_approximant(1), ratio(0, 1));
    for s in [2u64, 7, 40] {
        let expect = ratio(1, 1) - rational::pow2_neg(s);
        assert_eq!(x.stage_approximant(s), expect);
    }
}

#[test]
fn witness_parse_rejects_garbage() {
    for bad in ["", "heron)", "add(heron)", "scale(x,heron)", "jump-sum(0)", "oracle-sum(1)", "rational 1/0", "sin-taylor(heron"] {
        assert!(Witness::parse(bad).is_err(), "{bad}");
    }
    assert!(matches!(replay("sin-taylor(heron)"), Err(DCompError::Real(_))));
}

#[test]
fn literal_counts() {
    // 2..9
    assert_eq!(literals(1).len(), 8);
    // 10..99, p/q with single digits and q >= 2, -1..-9
    let fractions = (1..10u64)
        .flat_map(|p| (2..10u64).map(move |q| (p, q)))
        .filter(|&(p, q)| num_integer::gcd(p, q) == 1)
        .count();
    assert_eq!(literals(2).len(), 90 + fractions + 9);
    assert!(literals(3).iter().all(|q| rational::digit_size(q) == 3));
}

#[test]
fn level1_counts_follow_the_grammar() {
    let l = Ladder::standard();
    let n = |s: u32| l.level1(s).len();
    assert_eq!(n(1), 4);
    assert_eq!(n(2), 2 * n(1));
    assert_eq!(n(3), 2 * n(2) + 2 * n(1) * n(1) + literals(1).len() * n(1));
    assert_eq!(
        n(4),
        2 * n(3) + 2 * 2 * n(1) * n(2) + literals(1).len() * n(2) + literals(2).len() * n(1)
    );
}

fn sample(size: u32, i: usize) -> &'static Candidate {
    let xs = Ladder::standard().level1(size);
    &xs[i % xs.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn candidate_text_round_trips(size in 1u32..=5, i in any::<usize>()) {
        let c = sample(size, i);
        prop_assert_eq!(c.expr.size(), size);
        prop_assert_eq!(Witness::parse(&c.text).unwrap(), Witness::Expr((*c.expr).clone()));
        prop_assert_eq!(c.expr.to_string(), c.text.clone());
    }

    #[test]
    fn previews_track_values(size in 1u32..=4, i in any::<usize>()) {
        let c = sample(size, i);
        if let Ok(x) = c.expr.build() {
            let n = x.precision_cap().unwrap_or(30).min(30);
            let v = grammar::rational_f64(&x.approximant(n));
            let tol = 1e-6 * v.abs().max(1.0) + grammar::rational_f64(&rational::pow2_neg(n as u64));
            prop_assert!((v - c.preview).abs() <= tol, "{} {} {}", c.text, v, c.preview);
        } else {
            prop_assert!(c.preview.is_nan() || c.text.contains("sin-taylor"));
        }
    }

    #[test]
    fn budget_monotonicity(id in prop::sample::select(vec!["sqrt2", "e", "sin_sqrt2_over_6", "3/4", "specker"]),
                           b1 in 1u64..40_000, extra in 0u64..40_000) {
        let level = |b| dcomp(id, b).map(|d| d.level).unwrap_or(u32::MAX);
        prop_assert!(level(b1 + extra) <= level(b1));
    }

    #[test]
    fn deterministic(id in prop::sample::select(catalog().iter().map(|e| e.id).collect::<Vec<_>>()), b in 1u64..30_000) {
        prop_assert_eq!(dcomp(id, b), dcomp(id, b));
    }
}
