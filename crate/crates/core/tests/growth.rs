mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use statrs::distribution::{Beta, ContinuousCDF};

use common::{all_grafted_trees, plane_tree};
use prefattach::growth::*;
use prefattach::rng::{from_seed, stream};
use prefattach::stats::{chi_square, ks_test};
use prefattach::tree_core::{AbstractTreeCode, PlaneTree, Tree};

fn rat(p: usize, q: usize) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Law by brute force over every corner sequence of the plane chain.
fn corner_sequence_law(t: &PlaneTree, n: usize, p: BigRational, out: &mut BTreeMap<AbstractTreeCode, BigRational>) {
    if t.num_vertices() == n {
        *out.entry(t.canonical_code()).or_insert_with(BigRational::zero) += p;
        return;
    }
    let k = t.corner_count();
    for c in t.corners() {
        corner_sequence_law(&t.grafted(c).unwrap(), n, &p * rat(1, k), out);
    }
}

fn chi_square_against(counts: &BTreeMap<String, u64>, law: &BTreeMap<String, BigRational>, samples: u64) -> f64 {
    assert!(counts.keys().all(|k| law.contains_key(k)), "sample outside the exact support");
    let observed: Vec<u64> = law.keys().map(|k| counts.get(k).copied().unwrap_or(0)).collect();
    let expected: Vec<f64> = law.values().map(|p| p.to_f64().unwrap() * samples as f64).collect();
    chi_square(&observed, &expected).unwrap().2
}

#[test]
fn uniform_corner_law_without_offset() {
    for n in 2..=6 {
        for t in all_grafted_trees(n) {
            let law = corner_law(&t, &BigRational::zero()).unwrap();
            assert_eq!(law.len(), t.corner_count());
            assert!(law.iter().all(|(_, p)| *p == rat(1, t.corner_count())));
        }
    }
    let planted = plane_tree(&[3, 1, 4], true);
    let law = corner_law(&planted, &BigRational::zero()).unwrap();
    assert!(law.iter().all(|(_, p)| *p == rat(1, planted.corner_count())));
}

#[test]
fn affine_corner_law_weights_vertices() {
    let delta = rat(3, 2);
    for t in all_grafted_trees(5) {
        let law = corner_law(&t, &delta).unwrap();
        let total: BigRational = law.iter().map(|(_, p)| p.clone()).sum();
        assert!(total.is_one());
        let denom = BigRational::from_integer(BigInt::from(t.corner_count())) + &delta * BigRational::from_integer(BigInt::from(t.num_vertices()));
        for v in 0..t.num_vertices() {
            let mass: BigRational = law.iter().filter(|(c, _)| c.vertex == v).map(|(_, p)| p.clone()).sum();
            let expect = (BigRational::from_integer(BigInt::from(t.degree(v))) + &delta) / &denom;
            assert_eq!(mass, expect);
        }
    }
}

#[test]
fn exact_law_matches_corner_sequences() {
    for (seed, n) in [(PlaneTree::path(3), 7), (PlaneTree::star(4), 8), (PlaneTree::path(2), 7)] {
        let mut oracle = BTreeMap::new();
        corner_sequence_law(&seed, n, BigRational::one(), &mut oracle);
        let exact = exact_step_distribution(&seed, n).unwrap();
        assert_eq!(exact.support, oracle);
        assert!(exact.total().is_one());
    }
}

#[test]
fn free_growth_matches_exact_law() {
    let seed = Tree::path(4);
    let law: BTreeMap<String, BigRational> = exact_step_distribution(&PlaneTree::from_tree(&seed, 0).unwrap(), 8)
        .unwrap()
        .support
        .into_iter()
        .map(|(k, p)| (k.0, p))
        .collect();
    let samples = 40_000;
    let mut counts = BTreeMap::new();
    for r in 0..samples {
        let t = grow_free_tree(&seed, 8, &mut stream(3, r)).unwrap();
        *counts.entry(t.canonical_code().0).or_insert(0) += 1;
    }
    assert!(chi_square_against(&counts, &law, samples) > 0.001);
}

#[test]
fn plane_growth_matches_exact_law() {
    let seed = PlaneTree::star(4);
    let law: BTreeMap<String, BigRational> =
        exact_step_distribution(&seed, 8).unwrap().support.into_iter().map(|(k, p)| (k.0, p)).collect();
    let samples = 40_000;
    let mut counts = BTreeMap::new();
    for r in 0..samples {
        let t = grow_lpam_tree(&seed, 8, 0.0, &mut stream(4, r)).unwrap();
        *counts.entry(t.canonical_code().0).or_insert(0) += 1;
    }
    assert!(chi_square_against(&counts, &law, samples) > 0.001);
}

#[test]
fn remy_and_ford_samplers_match_exact_laws() {
    let samples = 60_000;
    let remy_law = merge_law(remy_paths(4).unwrap().into_iter().map(|(b, p)| (b.shape_code(), p)));
    let mut counts = BTreeMap::new();
    for r in 0..samples {
        let b = grow_remy(4, &mut stream(5, r)).unwrap().final_state;
        *counts.entry(b.shape_code()).or_insert(0) += 1;
    }
    assert!(chi_square_against(&counts, &remy_law, samples) > 0.001);
    for modified in [false, true] {
        let alpha = rat(1, 3);
        let law = merge_law(ford_paths(4, &alpha, modified).unwrap().into_iter().map(|(b, p)| (b.shape_code(), p)));
        let mut counts = BTreeMap::new();
        for r in 0..samples {
            let b = grow_ford(4, 1.0 / 3.0, modified, &mut stream(6, r)).unwrap().final_state;
            *counts.entry(b.shape_code()).or_insert(0) += 1;
        }
        assert!(chi_square_against(&counts, &law, samples) > 0.001, "modified = {modified}");
    }
}

#[test]
fn seed_decomposition_matches_exact_law_on_star() {
    let seed = PlaneTree::star(4);
    let law: BTreeMap<String, BigRational> =
        exact_step_distribution(&seed, 7).unwrap().support.into_iter().map(|(k, p)| (k.0, p)).collect();
    let samples = 30_000;
    let mut counts = BTreeMap::new();
    for r in 0..samples {
        let d = decompose_growth(&seed, 7, &mut stream(7, r)).unwrap();
        assert!(d.urn.is_consistent(3));
        *counts.entry(d.tree.canonical_code().0).or_insert(0) += 1;
    }
    assert!(chi_square_against(&counts, &law, samples) > 0.001);
}

#[test]
fn polya_first_color_has_beta_limit() {
    let colors = 4;
    let draws = 100_000;
    let xs: Vec<f64> = (0..400)
        .map(|r| {
            let urn = polya_sample(draws, colors, &mut stream(8, r)).unwrap();
            urn.counts[0] as f64 / urn.total() as f64
        })
        .collect();
    let beta = Beta::new(0.5, (colors as f64 - 1.0) / 2.0).unwrap();
    let (_, p) = ks_test(&xs, |x| beta.cdf(x.clamp(0.0, 1.0)));
    assert!(p > 0.001, "p = {p}");
}

#[test]
fn growth_is_reproducible() {
    let seed = PlaneTree::parse("((()))", false).unwrap();
    let a = grow_lpam(&seed, 1000, 0.0, 7).unwrap();
    let b = grow_lpam(&seed, 1000, 0.0, 7).unwrap();
    let c = grow_lpam(&seed, 1000, 0.0, 8).unwrap();
    assert_eq!(a.to_jsonl(), b.to_jsonl());
    assert_ne!(a.to_jsonl(), c.to_jsonl());
    assert_eq!(a.final_state.num_vertices(), 1000);
    assert!(a.replays().unwrap());
}

proptest! {
    #[test]
    fn coupled_sizes_agree(n in 1usize..60, seed: u64) {
        let run = grow_coupled(n, &mut from_seed(seed)).unwrap();
        prop_assert_eq!(run.plane.final_state.num_vertices(), n);
        prop_assert!(run.plane.final_state.is_planted());
        prop_assert_eq!(run.binary.final_state.leaves().len(), n + 1);
        prop_assert_eq!(run.binary.final_state.num_edges(), run.plane.final_state.corner_count());
    }

    #[test]
    fn urn_counts_are_odd(draws in 0usize..500, colors in 1usize..10, seed: u64) {
        let urn = polya_sample(draws, colors, &mut from_seed(seed)).unwrap();
        prop_assert!(urn.is_consistent(draws as u64));
    }

    #[test]
    fn trajectories_replay(n in 2usize..80, delta in 0.0f64..3.0, seed: u64) {
        let t = grow_lpam(&PlaneTree::planted_vertex(), n, delta, seed).unwrap();
        prop_assert!(t.replays().unwrap());
        let back = GrowthTrajectory::from_jsonl(&t.to_jsonl()).unwrap();
        prop_assert_eq!(back.final_state.serialize(), t.final_state.serialize());
    }
}
