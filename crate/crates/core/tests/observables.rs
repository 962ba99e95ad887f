mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use common::free_tree;
use prefattach::observables::*;
use prefattach::tree_core::{enumerate_abstract_trees, DecoratedTree, Tree};

fn small_taus() -> Vec<DecoratedTree> {
    enumerate_decorated(4, 4).unwrap().elements().to_vec()
}

#[test]
fn precedence_is_a_strict_partial_order() {
    let u = enumerate_decorated(5, 5).unwrap();
    let e = u.elements();
    for a in e {
        assert!(!precedes(a, a));
        for b in e {
            if precedes(a, b) {
                assert!(!precedes(b, a));
                for c in e {
                    if precedes(b, c) {
                        assert!(precedes(a, c));
                    }
                }
            }
        }
    }
}

#[test]
fn degree_labels_detect_the_seed_shape() {
    for n in 2..=7 {
        let trees: Vec<Tree> = enumerate_abstract_trees(n).unwrap().into_values().collect();
        for s in &trees {
            let tau = DecoratedTree::degree_labeled(s).unwrap();
            for t in &trees {
                let same = t.canonical_code() == s.canonical_code();
                assert_eq!(d_tau(&tau, t) > 0, same, "{} in {}", tau.code(), t.canonical_code());
            }
        }
    }
}

#[test]
fn witness_separates_path_and_star() {
    let tau = distinguishing_tau(&Tree::path(4), &Tree::star(4)).unwrap();
    let again = distinguishing_tau(&Tree::star(4), &Tree::path(4)).unwrap();
    assert_eq!(tau, again);
    assert!(distinguishing_tau(&Tree::path(4), &Tree::path(4)).is_err());
}

fn f(x: &BigRational) -> f64 {
    ToPrimitive::to_f64(x).unwrap()
}

proptest! {
    #[test]
    fn dp_count_matches_backtracking(parents in prop::collection::vec(0usize..1000, 0..9), pick in 0usize..1000) {
        let t = free_tree(&parents);
        let taus = small_taus();
        let tau = &taus[pick % taus.len()];
        prop_assert_eq!(d_tau(tau, &t), d_tau_brute_force(tau, &t));
    }

    #[test]
    fn disjoint_vertex_pairs(parents in prop::collection::vec(0usize..1000, 1..9)) {
        let t = free_tree(&parents);
        let one = DecoratedTree::vertex(1).unwrap();
        let n = t.num_vertices() as u128;
        let squares: u128 = t.degrees().iter().map(|&d| (d * d) as u128).sum();
        prop_assert_eq!(d_tau_pair(&one, &one, &t), (2 * n - 2).pow(2) - squares);
    }

    #[test]
    fn recurrence_on_larger_hosts(parents in prop::collection::vec(0usize..1000, 6..8), pick in 0usize..1000) {
        let t = free_tree(&parents);
        let taus: Vec<DecoratedTree> = enumerate_decorated(5, 5).unwrap().elements().iter().filter(|x| x.weight() >= 2).cloned().collect();
        let tau = &taus[pick % taus.len()];
        prop_assert_eq!(recurrence_rhs(tau, &t).unwrap(), one_step_expectation(tau, &t).unwrap());
    }

    #[test]
    fn float_tables_track_exact_ones(parents in prop::collection::vec(0usize..1000, 5..30), pick in 0usize..1000) {
        let t = free_tree(&parents);
        let taus: Vec<DecoratedTree> = small_taus().into_iter().filter(|x| x.weight() >= 2).collect();
        let tau = &taus[pick % taus.len()];
        let n = t.num_vertices();
        let exact: ExactTable = martingale_table(tau, n + 1).unwrap();
        let float: FloatTable = martingale_table(tau, n + 1).unwrap();
        let e = f(&martingale_value(&exact, &t).unwrap());
        let x = martingale_value(&float, &t).unwrap();
        prop_assert!((e - x).abs() <= 1e-9 * e.abs().max(1.0), "{} vs {}", e, x);
        // One-step identity in floating point.
        let mut expect = 0.0;
        for v in 0..n {
            expect += t.degree(v) as f64 / (2 * n - 2) as f64 * martingale_value(&float, &t.with_leaf(v)).unwrap();
        }
        prop_assert!((expect - x).abs() <= 1e-9 * x.abs().max(1.0));
    }

    #[test]
    fn tv_bounds_agree(m1 in -5i64..5, m2 in -5i64..5, v1 in 0i64..10, v2 in 0i64..10) {
        let b = tv_lower_bound(m1 as f64, v1 as f64, m2 as f64, v2 as f64).unwrap();
        prop_assert!((0.0..=1.0).contains(&b));
        let r = |x: i64| BigRational::from_integer(BigInt::from(x));
        let exact = tv_lower_bound_exact(&r(m1), &r(v1), &r(m2), &r(v2)).unwrap();
        prop_assert!((f(&exact) - b).abs() < 1e-12);
    }
}
