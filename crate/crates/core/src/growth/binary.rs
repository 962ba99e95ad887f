use rand::Rng;

use crate::error::{param, Error, Result};
use crate::tree_core::Tree;

/// Binary tree with labeled leaves `A_0, ..., A_n`, built by edge splitting.
///
/// Vertex ids: `A_0 = 0`, `A_1 = 1`, and the split creating `A_k` adds the
/// internal vertex `2k - 2` and the leaf `2k - 1`.  Edges are stored as
/// `(upper, lower)` pairs oriented away from `A_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledBinaryTree {
    edges: Vec<(usize, usize)>,
    leaves: Vec<usize>,
    num_vertices: usize,
}

impl Default for LabeledBinaryTree {
    fn default() -> Self {
        Self::new()
    }
}

impl LabeledBinaryTree {
    /// The single edge `A_0 - A_1`.
    pub fn new() -> Self {
        LabeledBinaryTree { edges: vec![(0, 1)], leaves: vec![0, 1], num_vertices: 2 }
    }

    /// Number of labeled leaves minus one.
    pub fn steps(&self) -> usize {
        self.leaves.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Vertex ids of `A_0, ..., A_n`.
    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    /// Splits edge `e = (a, b)` by a new vertex `v` carrying a new leaf.
    ///
    /// Afterwards edge `e` is `(a, v)`, the next id is `(v, b)`, and the one
    /// after is `(v, leaf)`.  Returns `(v, leaf)`.
    pub fn split(&mut self, e: usize) -> Result<(usize, usize)> {
        let &(a, b) = self.edges.get(e).ok_or_else(|| param(format!("no edge {e}")))?;
        let v = self.num_vertices;
        let leaf = v + 1;
        self.num_vertices += 2;
        self.edges[e] = (a, v);
        self.edges.push((v, b));
        self.edges.push((v, leaf));
        self.leaves.push(leaf);
        Ok((v, leaf))
    }

    pub fn to_tree(&self) -> Tree {
        Tree::from_edges(self.num_vertices, &self.edges).expect("splitting preserves the tree property")
    }

    /// Leaf-labeled shape, independent of internal vertex ids.
    ///
    /// Rooted at `A_0`; a leaf renders as `A<i>` and an internal vertex as
    /// its sorted children in parentheses.
    pub fn shape_code(&self) -> String {
        let mut label = vec![usize::MAX; self.num_vertices];
        for (i, &v) in self.leaves.iter().enumerate() {
            label[v] = i;
        }
        let mut kids = vec![Vec::new(); self.num_vertices];
        for &(a, b) in &self.edges {
            kids[a].push(b);
        }
        fn code(v: usize, kids: &[Vec<usize>], label: &[usize]) -> String {
            if kids[v].is_empty() {
                return format!("A{}", label[v]);
            }
            let mut parts: Vec<String> = kids[v].iter().map(|&c| code(c, kids, label)).collect();
            parts.sort();
            let inner = parts.join(",");
            if label[v] == usize::MAX {
                format!("({inner})")
            } else {
                format!("A{}[{inner}]", label[v])
            }
        }
        code(0, &kids, &label)
    }

    /// Edge ids grouped by the geodesic that created them: entry `e` is the
    /// unique `i >= 1` such that edge `e` lies on the path from `A_i` to the
    /// span of `A_0, ..., A_{i-1}`.  Computed from scratch.
    pub fn geodesic_classes(&self) -> Vec<usize> {
        let t = self.to_tree();
        let n = self.num_vertices;
        let parent = t.parents_from(self.leaves[0]);
        let mut in_span = vec![false; n];
        in_span[self.leaves[0]] = true;
        let mut class_of_child = vec![0usize; n];
        for (i, &x) in self.leaves.iter().enumerate().skip(1) {
            let mut u = x;
            while !in_span[u] {
                in_span[u] = true;
                class_of_child[u] = i;
                u = parent[u];
            }
        }
        self.edges
            .iter()
            .map(|&(a, b)| {
                let child = if parent[b] == a { b } else { a };
                class_of_child[child]
            })
            .collect()
    }
}

/// A binary growth run: the split edge at every step and the final tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryTrajectory {
    pub splits: Vec<usize>,
    pub final_state: LabeledBinaryTree,
}

impl BinaryTrajectory {
    /// `B_1, ..., B_n` by replay.
    pub fn states(&self) -> impl Iterator<Item = LabeledBinaryTree> + '_ {
        let mut b = LabeledBinaryTree::new();
        std::iter::once(b.clone()).chain(self.splits.iter().map(move |&e| {
            b.split(e).expect("recorded splits are valid");
            b.clone()
        }))
    }

    pub fn state(&self, k: usize) -> Result<LabeledBinaryTree> {
        if k == 0 || k > self.splits.len() + 1 {
            return Err(Error::SizeMismatch(format!("no state B_{k}")));
        }
        let mut b = LabeledBinaryTree::new();
        for &e in &self.splits[..k - 1] {
            b.split(e)?;
        }
        Ok(b)
    }
}

/// Rémy's algorithm: `B_1, ..., B_n`, splitting a uniform edge each step.
pub fn grow_remy<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BinaryTrajectory> {
    if n == 0 {
        return Err(param("Rémy growth needs n >= 1"));
    }
    let mut b = LabeledBinaryTree::new();
    let mut splits = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let e = rng.random_range(0..b.num_edges());
        b.split(e)?;
        splits.push(e);
    }
    Ok(BinaryTrajectory { splits, final_state: b })
}

/// Ford's weighted splitting, optionally in the geodesic-resampling form.
#[derive(Clone, Debug)]
pub struct FordGrower {
    tree: LabeledBinaryTree,
    alpha: f64,
    modified: bool,
    leaf_edge: Vec<usize>,
    is_leaf_edge: Vec<bool>,
    class_of: Vec<usize>,
    class_edges: Vec<Vec<usize>>,
}

impl FordGrower {
    pub fn new(alpha: f64, modified: bool) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(param(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(FordGrower {
            tree: LabeledBinaryTree::new(),
            alpha,
            modified,
            leaf_edge: vec![usize::MAX, 0],
            is_leaf_edge: vec![true],
            class_of: vec![1],
            class_edges: vec![Vec::new(), vec![0]],
        })
    }

    pub fn tree(&self) -> &LabeledBinaryTree {
        &self.tree
    }

    pub fn classes(&self) -> &[usize] {
        &self.class_of
    }

    fn sample_weighted<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let n = self.tree.steps();
        let leaf_mass = n as f64 * (1.0 - self.alpha);
        let inner_mass = (n - 1) as f64 * self.alpha;
        if inner_mass == 0.0 || rng.random::<f64>() * (leaf_mass + inner_mass) < leaf_mass {
            self.leaf_edge[rng.random_range(1..=n)]
        } else {
            loop {
                let e = rng.random_range(0..self.tree.num_edges());
                if !self.is_leaf_edge[e] {
                    return e;
                }
            }
        }
    }

    /// Picks the edge to split next.
    pub fn sample_edge<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let e = self.sample_weighted(rng);
        if !self.modified {
            return e;
        }
        let members = &self.class_edges[self.class_of[e]];
        members[rng.random_range(0..members.len())]
    }

    pub fn apply(&mut self, e: usize) -> Result<()> {
        let (_, b) = self.tree.edges()[e];
        let (_, leaf) = self.tree.split(e)?;
        let upper_half = e;
        let lower_half = self.tree.num_edges() - 2;
        let new_leaf_edge = self.tree.num_edges() - 1;
        let was_leaf = self.is_leaf_edge[e];
        self.is_leaf_edge[upper_half] = false;
        self.is_leaf_edge.push(was_leaf);
        self.is_leaf_edge.push(true);
        if was_leaf {
            // Leaf A_i has vertex id 2i - 1.
            self.leaf_edge[b.div_ceil(2)] = lower_half;
        }
        self.leaf_edge.push(new_leaf_edge);
        debug_assert_eq!(self.tree.leaves().last(), Some(&leaf));
        let class = self.class_of[e];
        self.class_of.push(class);
        self.class_edges[class].push(lower_half);
        self.class_of.push(self.class_edges.len());
        self.class_edges.push(vec![new_leaf_edge]);
        Ok(())
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let e = self.sample_edge(rng);
        self.apply(e).expect("sampled edges are valid");
        e
    }
}

/// Ford's algorithm from `B_1` to `n` labeled leaves beyond `A_0`.
pub fn grow_ford<R: Rng + ?Sized>(n: usize, alpha: f64, modified: bool, rng: &mut R) -> Result<BinaryTrajectory> {
    if n == 0 {
        return Err(param("Ford growth needs n >= 1"));
    }
    let mut g = FordGrower::new(alpha, modified)?;
    let splits = (1..n).map(|_| g.step(rng)).collect();
    Ok(BinaryTrajectory { splits, final_state: g.tree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;

    #[test]
    fn split_bookkeeping() {
        let mut b = LabeledBinaryTree::new();
        assert_eq!(b.split(0).unwrap(), (2, 3));
        assert_eq!(b.edges(), &[(0, 2), (2, 1), (2, 3)]);
        assert_eq!(b.leaves(), &[0, 1, 3]);
        assert_eq!(b.shape_code(), "A0[(A1,A2)]");
        assert!(b.split(3).is_err());
    }

    #[test]
    fn sizes_after_growth() {
        let t = grow_remy(20, &mut from_seed(3)).unwrap();
        let b = &t.final_state;
        assert_eq!(b.num_edges(), 2 * 20 - 1);
        assert_eq!(b.leaves().len(), 21);
        let tree = b.to_tree();
        assert!(b.leaves().iter().all(|&x| tree.degree(x) == 1));
        assert!((0..b.num_vertices()).all(|v| [1, 3].contains(&tree.degree(v))));
        assert_eq!(t.states().count(), 20);
        assert_eq!(t.state(20).unwrap(), *b);
    }

    #[test]
    fn incremental_classes_match_recomputation() {
        for seed in 0..20 {
            let mut g = FordGrower::new(0.3, true).unwrap();
            let mut rng = from_seed(seed);
            for _ in 0..30 {
                g.step(&mut rng);
                assert_eq!(g.classes(), g.tree().geodesic_classes().as_slice());
            }
        }
    }

    #[test]
    fn alpha_zero_never_splits_inner_edges() {
        let mut rng = from_seed(5);
        for _ in 0..200 {
            let mut g = FordGrower::new(0.0, false).unwrap();
            g.step(&mut rng);
            let e = g.sample_edge(&mut rng);
            assert!(g.is_leaf_edge[e]);
        }
        assert!(FordGrower::new(1.5, false).is_err());
    }
}
