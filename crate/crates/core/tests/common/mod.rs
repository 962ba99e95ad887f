#![allow(dead_code)]

use prefattach::tree_core::{PlaneTree, Tree};

/// Plane tree grown from a single edge (or the planted vertex) by grafting
/// into corner `c mod #corners` for each `c`.
pub fn plane_tree(choices: &[usize], planted: bool) -> PlaneTree {
    let mut t = if planted { PlaneTree::planted_vertex() } else { PlaneTree::path(2) };
    for &c in choices {
        let corner = t.corners().nth(c % t.corner_count()).unwrap();
        t.graft(corner).unwrap();
    }
    t
}

/// Unordered tree where vertex `i + 1` hangs from `parents[i] mod (i + 1)`.
pub fn free_tree(parents: &[usize]) -> Tree {
    let edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p % (i + 1), i + 1)).collect();
    Tree::from_edges(parents.len() + 1, &edges).unwrap()
}

/// Same tree with vertex ids permuted by `perm`.
pub fn relabel(t: &Tree, perm: &[usize]) -> Tree {
    let edges: Vec<(usize, usize)> = t.edges().map(|(a, b)| (perm[a], perm[b])).collect();
    Tree::from_edges(t.num_vertices(), &edges).unwrap()
}

/// Every distinct plane tree on `n >= 2` vertices reachable from an edge by
/// grafting, keyed by serialization.
pub fn all_grafted_trees(n: usize) -> Vec<PlaneTree> {
    let mut level = vec![PlaneTree::path(2)];
    for _ in 2..n {
        let mut seen = std::collections::BTreeMap::new();
        for t in &level {
            for c in t.corners() {
                let g = t.grafted(c).unwrap();
                seen.insert(g.serialize(), g);
            }
        }
        level = seen.into_values().collect();
    }
    level
}
