use proptest::prelude::*;

use prefattach::gh_metric::*;

fn euclidean(points: &[(f64, f64)]) -> FiniteMetricSpace {
    FiniteMetricSpace::from_fn(points.len(), |i, j| {
        let (a, b) = (points[i], points[j]);
        ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
    })
    .unwrap()
}

/// Minimum half-distortion over every relation accepted as a correspondence.
fn gh_by_all_relations(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    let cells: Vec<(usize, usize)> = (0..x.len()).flat_map(|a| (0..y.len()).map(move |b| (a, b))).collect();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << cells.len()) {
        let pairs: Vec<(usize, usize)> = (0..cells.len()).filter(|i| mask >> i & 1 == 1).map(|i| cells[i]).collect();
        let r = Correspondence::new(pairs);
        if let Ok(d) = gh_upper_from_correspondence(x, y, &r) {
            best = best.min(d);
        }
    }
    best
}

fn points(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 1..=max)
        .prop_filter("distinct points", |p| {
            p.iter().enumerate().all(|(i, a)| p[..i].iter().all(|b| (a.0 - b.0).abs() + (a.1 - b.1).abs() > 1e-6))
        })
}

#[test]
fn size_guard_and_mark_mismatch() {
    let big = FiniteMetricSpace::from_fn(GH_EXACT_LIMIT + 1, |i, j| (i as f64 - j as f64).abs()).unwrap();
    let small = FiniteMetricSpace::from_fn(2, |i, j| (i as f64 - j as f64).abs()).unwrap();
    assert!(gh_exact_small(&big, &small).is_err());
    let marked = small.clone().with_mark("root", 0).unwrap();
    assert!(gh_exact_small(&marked, &small).is_err());
}

#[test]
fn rejects_broken_tables() {
    assert!(FiniteMetricSpace::from_table(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
    assert!(FiniteMetricSpace::from_table(2, vec![0.0, 0.0, 0.0, 0.0]).is_err());
    assert!(FiniteMetricSpace::from_table(2, vec![0.0, 1.0]).is_err());
    let triangle = FiniteMetricSpace::from_fn(3, |i, j| if i == j { 0.0 } else if i + j == 1 { 5.0 } else { 1.0 }).unwrap();
    assert!(!triangle.satisfies_triangle_inequality());
}

proptest! {
    #[test]
    fn exact_matches_enumeration(a in points(3), b in points(3)) {
        let (x, y) = (euclidean(&a), euclidean(&b));
        let exact = gh_exact_small(&x, &y).unwrap();
        prop_assert!((exact - gh_by_all_relations(&x, &y)).abs() < 1e-9);
    }

    #[test]
    fn pointed_exact_matches_enumeration(a in points(3), b in points(3), i in 0usize..3, j in 0usize..3) {
        let x = euclidean(&a).with_mark("root", i % a.len()).unwrap();
        let y = euclidean(&b).with_mark("root", j % b.len()).unwrap();
        let exact = gh_exact_small(&x, &y).unwrap();
        prop_assert!((exact - gh_by_all_relations(&x, &y)).abs() < 1e-9);
    }

    #[test]
    fn exact_is_below_any_correspondence(a in points(5), b in points(5), extra in prop::collection::vec((0usize..5, 0usize..5), 0..6)) {
        let (x, y) = (euclidean(&a), euclidean(&b));
        let k = x.len().max(y.len());
        let mut pairs: Vec<(usize, usize)> = (0..k).map(|i| (i.min(x.len() - 1), i.min(y.len() - 1))).collect();
        pairs.extend(extra.iter().map(|&(p, q)| (p % x.len(), q % y.len())));
        let upper = gh_upper_from_correspondence(&x, &y, &Correspondence::new(pairs)).unwrap();
        let exact = gh_exact_small(&x, &y).unwrap();
        prop_assert!(exact <= upper + 1e-12);
        prop_assert!(exact + 1e-12 >= (x.diameter() - y.diameter()).abs() / 2.0);
    }

    #[test]
    fn exact_satisfies_triangle_inequality(a in points(4), b in points(4), c in points(4)) {
        let (x, y, z) = (euclidean(&a), euclidean(&b), euclidean(&c));
        let xy = gh_exact_small(&x, &y).unwrap();
        let yz = gh_exact_small(&y, &z).unwrap();
        let xz = gh_exact_small(&x, &z).unwrap();
        prop_assert!(xz <= xy + yz + 1e-9);
        prop_assert!((xy - gh_exact_small(&y, &x).unwrap()).abs() < 1e-12);
        prop_assert!(gh_exact_small(&x, &x).unwrap() < 1e-12);
    }

    #[test]
    fn scaling_scales_the_distance(a in points(4), b in points(4), factor in 0.1f64..10.0) {
        let (x, y) = (euclidean(&a), euclidean(&b));
        let d = gh_exact_small(&x, &y).unwrap();
        let scaled = gh_exact_small(&x.scaled(factor), &y.scaled(factor)).unwrap();
        prop_assert!((scaled - factor * d).abs() <= 1e-9 * (1.0 + factor * d));
    }

    #[test]
    fn csv_round_trips(a in points(8), mark in 0usize..8) {
        let x = euclidean(&a).with_mark("root", mark % a.len()).unwrap();
        let back = FiniteMetricSpace::from_csv(&x.to_csv()).unwrap();
        prop_assert_eq!(back.len(), x.len());
        prop_assert_eq!(back.marks(), x.marks());
        for i in 0..x.len() {
            for j in 0..x.len() {
                prop_assert_eq!(back.dist(i, j), x.dist(i, j));
            }
        }
    }

    #[test]
    fn hausdorff_is_symmetric_and_vanishes_on_equal_sets(a in points(8), s in prop::collection::vec(0usize..8, 1..5), t in prop::collection::vec(0usize..8, 1..5)) {
        let x = euclidean(&a);
        let n = x.len();
        let s: Vec<usize> = s.iter().map(|p| p % n).collect();
        let t: Vec<usize> = t.iter().map(|p| p % n).collect();
        let st = hausdorff_in_common(&x, &s, &t).unwrap();
        prop_assert_eq!(st, hausdorff_in_common(&x, &t, &s).unwrap());
        prop_assert_eq!(hausdorff_in_common(&x, &s, &s).unwrap(), 0.0);
        let all: Vec<usize> = (0..n).collect();
        prop_assert_eq!(net_radius(&x, &s).unwrap(), hausdorff_in_common(&x, &s, &all).unwrap());
    }
}
