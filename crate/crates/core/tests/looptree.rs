mod common;

use proptest::prelude::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{all_grafted_trees, plane_tree};
use prefattach::growth::decompose_growth;
use prefattach::looptree::*;
use prefattach::rng::stream;

fn permuted(lt: &Looptree, seed: u64) -> Looptree {
    let mut perm: Vec<usize> = (0..lt.num_vertices()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let edges = lt.edges().iter().map(|&(a, b)| (perm[a], perm[b])).collect();
    Looptree::new(lt.num_vertices(), edges).unwrap()
}

#[test]
fn loop_sizes_for_all_small_trees() {
    for n in 2..=8 {
        for t in all_grafted_trees(n) {
            let lt = loop_tree(&t).unwrap();
            assert_eq!(lt.num_vertices(), t.num_edges());
            assert_eq!(lt.num_edges(), t.corner_count());
            assert!(lt.is_connected());
        }
    }
}

#[test]
fn glue_on_seed_rebuilds_loop_of_assembled_tree() {
    let seeds: Vec<_> = (2..=5).flat_map(all_grafted_trees).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in 0..1000u64 {
        let seed = seeds.choose(&mut rng).unwrap();
        let n = rand::Rng::random_range(&mut rng, seed.num_vertices()..=30);
        let d = decompose_growth(seed, n, &mut stream(12, r)).unwrap();
        let parts: Vec<Looptree> = d.parts.iter().map(|p| modified_loop(p).unwrap()).collect();
        let glued = glue_on_seed(seed, &parts).unwrap();
        let direct = loop_tree(&d.tree).unwrap();
        assert!(glued.is_isomorphic(&direct, false).unwrap(), "seed {} n {n}", seed.serialize());
    }
}

#[test]
fn cycle_metrics() {
    let two = Looptree::new(2, vec![(0, 1), (0, 1)]).unwrap();
    let four = Looptree::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let PathMetric::Full(m) = shortest_path_metric(&two, None).unwrap() else { panic!() };
    assert_eq!(m.dist(0, 1), 1.0);
    let PathMetric::Full(m) = shortest_path_metric(&four, None).unwrap() else { panic!() };
    assert_eq!(m.dist(0, 2), 2.0);
    let split = Looptree::new(3, vec![(0, 1)]).unwrap();
    assert!(shortest_path_metric(&split, None).is_err());
}

proptest! {
    #[test]
    fn canonical_form_agrees_with_brute_force(a in prop::collection::vec(0usize..1000, 0..7), b in prop::collection::vec(0usize..1000, 0..7), seed: u64) {
        let la = loop_planted(&plane_tree(&a, true)).unwrap();
        let lb = loop_planted(&plane_tree(&b, true)).unwrap();
        prop_assume!(la.num_vertices() <= 8 && lb.num_vertices() <= 8);
        let lb = permuted(&lb, seed);
        let fast = la.canonical_form(false).unwrap() == lb.canonical_form(false).unwrap();
        prop_assert_eq!(fast, brute_force_isomorphic(&la, &lb, false).unwrap());
        let same = permuted(&la, seed ^ 1);
        prop_assert_eq!(la.canonical_form(false).unwrap(), same.canonical_form(false).unwrap());
    }

    #[test]
    fn cactus_diameter_matches_search(choices in prop::collection::vec(0usize..1000, 0..60), planted: bool) {
        let t = plane_tree(&choices, planted);
        let lt = if planted { loop_planted(&t).unwrap() } else { loop_tree(&t).unwrap() };
        let adj = lt.adjacency();
        let ecc = (0..lt.num_vertices()).map(|v| *adj.bfs(v).iter().max().unwrap()).max().unwrap();
        prop_assert_eq!(lt.to_cactus().unwrap().diameter().unwrap(), f64::from(ecc));
    }

    #[test]
    fn path_metric_is_a_metric(choices in prop::collection::vec(0usize..1000, 0..25), picks in prop::collection::vec(0usize..1000, 3..30)) {
        let lt = loop_tree(&plane_tree(&choices, false)).unwrap();
        let PathMetric::Full(m) = shortest_path_metric(&lt, None).unwrap() else { panic!("small input") };
        let n = m.len();
        for w in picks.windows(3) {
            let (x, y, z) = (w[0] % n, w[1] % n, w[2] % n);
            prop_assert!(m.dist(x, z) <= m.dist(x, y) + m.dist(y, z));
            prop_assert_eq!(m.dist(x, y), m.dist(y, x));
        }
    }
}
