mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{free_tree, plane_tree, relabel};
use prefattach::tree_core::{enumerate_abstract_trees, parse_tree, serialize_tree, DecoratedTree, PlaneTree, Tree};

#[derive(Debug)]
struct Node(Vec<Node>);

fn parse_nested(s: &[u8], pos: &mut usize) -> Node {
    assert_eq!(s[*pos], b'(');
    *pos += 1;
    let mut kids = Vec::new();
    while s[*pos] == b'(' {
        kids.push(parse_nested(s, pos));
    }
    *pos += 1;
    Node(kids)
}

fn shuffled(node: &Node, rng: &mut ChaCha8Rng) -> String {
    let mut parts: Vec<String> = node.0.iter().map(|k| shuffled(k, rng)).collect();
    parts.shuffle(rng);
    format!("({})", parts.concat())
}

/// Tree from a Prüfer sequence on `seq.len() + 2` vertices.
fn prufer_tree(seq: &[usize]) -> Tree {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::new();
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Tree::from_edges(n, &edges).unwrap()
}

#[test]
fn unlabeled_tree_counts_match_labeled_enumeration() {
    for n in 3..=8usize {
        let mut codes = BTreeSet::new();
        let total = n.pow(n as u32 - 2);
        for mut idx in 0..total {
            let seq: Vec<usize> = (0..n - 2)
                .map(|_| {
                    let d = idx % n;
                    idx /= n;
                    d
                })
                .collect();
            codes.insert(prufer_tree(&seq).canonical_code());
        }
        let enumerated = enumerate_abstract_trees(n).unwrap();
        assert_eq!(enumerated.len(), codes.len(), "n = {n}");
        assert!(enumerated.keys().all(|c| codes.contains(c)));
    }
}

#[test]
fn small_parse_examples() {
    let t = parse_tree("((()))", false).unwrap();
    assert_eq!((t.num_vertices(), t.corner_count()), (3, 4));
    let t = parse_tree("(()())", false).unwrap();
    assert_eq!(t.degrees(), vec![2, 1, 1]);
    assert!(parse_tree("(()", false).is_err());
    assert!(parse_tree("", false).is_err());
}

proptest! {
    #[test]
    fn degree_sums(choices in prop::collection::vec(0usize..1000, 0..40), planted: bool) {
        let t = plane_tree(&choices, planted);
        let n = t.num_vertices();
        let sum: usize = t.degrees().iter().sum();
        prop_assert_eq!(sum, if planted { 2 * n - 1 } else { 2 * n - 2 });
        prop_assert_eq!(t.corner_count(), sum);
    }

    #[test]
    fn graft_adds_two_corners(choices in prop::collection::vec(0usize..1000, 0..30), planted: bool, pick in 0usize..1000) {
        let t = plane_tree(&choices, planted);
        let c = t.corners().nth(pick % t.corner_count()).unwrap();
        let g = t.grafted(c).unwrap();
        prop_assert_eq!(g.is_planted(), planted);
        prop_assert_eq!(g.corner_count(), t.corner_count() + 2);
        prop_assert_eq!(g.num_vertices(), t.num_vertices() + 1);
    }

    #[test]
    fn serialization_round_trips(choices in prop::collection::vec(0usize..1000, 0..40), planted: bool) {
        let t = plane_tree(&choices, planted);
        let text = serialize_tree(&t);
        let back = parse_tree(&text, planted).unwrap();
        prop_assert_eq!(serialize_tree(&back), text);
        prop_assert_eq!(back.degrees(), t.renumbered().degrees());
    }

    #[test]
    fn canonical_code_ignores_child_order(choices in prop::collection::vec(0usize..1000, 0..40), seed: u64) {
        let t = plane_tree(&choices, false);
        let text = t.serialize();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nested = parse_nested(text.as_bytes(), &mut 0);
        let other = PlaneTree::parse(&shuffled(&nested, &mut rng), false).unwrap();
        prop_assert_eq!(other.canonical_code(), t.canonical_code());
    }

    #[test]
    fn canonical_code_ignores_labels_and_root(parents in prop::collection::vec(0usize..1000, 1..30), seed: u64, root in 0usize..1000) {
        let t = free_tree(&parents);
        let mut perm: Vec<usize> = (0..t.num_vertices()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let r = relabel(&t, &perm);
        prop_assert_eq!(r.canonical_code(), t.canonical_code());
        let p = PlaneTree::from_tree(&t, root % t.num_vertices()).unwrap();
        prop_assert_eq!(p.canonical_code(), t.canonical_code());
    }

    #[test]
    fn span_is_union_of_geodesics(parents in prop::collection::vec(0usize..1000, 1..25), picks in prop::collection::vec(0usize..1000, 1..5)) {
        let t = free_tree(&parents);
        let n = t.num_vertices();
        let vs: Vec<usize> = picks.iter().map(|p| p % n).collect();
        let span: BTreeSet<usize> = t.span(&vs).unwrap().into_iter().collect();
        let dist: Vec<Vec<usize>> = (0..n).map(|v| t.distances_from(v)).collect();
        let oracle: BTreeSet<usize> = (0..n)
            .filter(|&u| vs.iter().any(|&a| vs.iter().any(|&b| dist[a][u] + dist[u][b] == dist[a][b])))
            .collect();
        prop_assert_eq!(span, oracle);
    }

    #[test]
    fn decorated_code_round_trips(parents in prop::collection::vec(0usize..1000, 0..6), labels in prop::collection::vec(1u32..5, 7)) {
        let t = free_tree(&parents);
        let n = t.num_vertices();
        let d = DecoratedTree::new(t, labels[..n].to_vec()).unwrap();
        let back = DecoratedTree::parse(d.code()).unwrap();
        prop_assert_eq!(back.code(), d.code());
        prop_assert_eq!(back.weight(), labels[..n].iter().sum::<u32>());
        prop_assert_eq!(back.size(), n);
    }
}
