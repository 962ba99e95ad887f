use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{structure, Error, Result};

/// Unordered, unrooted tree on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
}

/// Canonical form of an unlabeled unordered tree.
///
/// The code is itself a balanced parenthesis word, so it can be parsed back
/// into a representative plane tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbstractTreeCode(pub String);

impl fmt::Display for AbstractTreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AbstractTreeCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// A representative tree with this code.
    pub fn to_tree(&self) -> Result<Tree> {
        Ok(super::PlaneTree::parse(&self.0, false)?.to_tree())
    }
}

impl Tree {
    pub fn single_vertex() -> Self {
        Tree { adj: vec![Vec::new()] }
    }

    /// Builds a tree, checking that the edges form a spanning tree.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(structure("a tree needs at least one vertex"));
        }
        if edges.len() + 1 != n {
            return Err(structure(format!("{} edges on {} vertices", edges.len(), n)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n {
                return Err(Error::UnknownVertex(a));
            }
            if b >= n {
                return Err(Error::UnknownVertex(b));
            }
            if a == b {
                return Err(structure("self-loop in tree"));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let t = Tree { adj };
        if t.bfs_order(0).len() != n {
            return Err(structure("edges do not connect all vertices"));
        }
        Ok(t)
    }

    pub(crate) fn from_adjacency_unchecked(adj: Vec<Vec<usize>>) -> Self {
        Tree { adj }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Tree::from_edges(n.max(1), &edges).expect("path is a tree")
    }

    pub fn star(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Tree::from_edges(n.max(1), &edges).expect("star is a tree")
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.len() - 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// Tree with one extra leaf attached at `v`; the leaf gets id `n`.
    pub fn with_leaf(&self, v: usize) -> Tree {
        let mut adj = self.adj.clone();
        let leaf = adj.len();
        adj[v].push(leaf);
        adj.push(vec![v]);
        Tree { adj }
    }

    pub(crate) fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.adj.len()];
        let mut order = Vec::with_capacity(self.adj.len());
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// Parent array of the tree rooted at `root` (the root maps to itself).
    pub fn parents_from(&self, root: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.adj.len()];
        parent[root] = root;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        parent
    }

    /// One or two centroids.
    pub fn centroids(&self) -> Vec<usize> {
        let n = self.adj.len();
        let order = self.bfs_order(0);
        let parent = self.parents_from(0);
        let mut size = vec![1usize; n];
        for &u in order.iter().rev() {
            if u != 0 {
                size[parent[u]] += size[u];
            }
        }
        let mut out = Vec::new();
        for u in 0..n {
            let mut heaviest = n - size[u];
            for &w in &self.adj[u] {
                if parent[w] == u {
                    heaviest = heaviest.max(size[w]);
                }
            }
            if 2 * heaviest <= n {
                out.push(u);
            }
        }
        out
    }

    /// Labeled AHU code of the tree rooted at `root`.
    ///
    /// Without labels a vertex renders as `(` children `)`; with labels as
    /// `(` label children `)`, children sorted lexicographically.
    pub(crate) fn rooted_code(&self, root: usize, labels: Option<&[u32]>) -> String {
        let n = self.adj.len();
        let parent = self.parents_from(root);
        let order = self.bfs_order(root);
        let mut codes: Vec<String> = vec![String::new(); n];
        let mut kids: Vec<Vec<String>> = vec![Vec::new(); n];
        for &u in order.iter().rev() {
            let mut ch = std::mem::take(&mut kids[u]);
            ch.sort_unstable();
            let mut s = String::with_capacity(2 + ch.iter().map(String::len).sum::<usize>());
            s.push('(');
            if let Some(l) = labels {
                s.push_str(&l[u].to_string());
            }
            for c in ch {
                s.push_str(&c);
            }
            s.push(')');
            if u == root {
                codes[u] = s;
            } else {
                kids[parent[u]].push(s);
            }
        }
        std::mem::take(&mut codes[root])
    }

    pub(crate) fn centered_code(&self, labels: Option<&[u32]>) -> String {
        self.centroids()
            .into_iter()
            .map(|c| self.rooted_code(c, labels))
            .min()
            .expect("every tree has a centroid")
    }

    pub fn canonical_code(&self) -> AbstractTreeCode {
        AbstractTreeCode(self.centered_code(None))
    }

    /// Vertices of the minimal subtree containing `vs`, in increasing order.
    pub fn span(&self, vs: &[usize]) -> Result<Vec<usize>> {
        let n = self.adj.len();
        let Some(&first) = vs.first() else {
            return Err(structure("span of an empty vertex list"));
        };
        if let Some(&bad) = vs.iter().find(|&&v| v >= n) {
            return Err(Error::UnknownVertex(bad));
        }
        let parent = self.parents_from(first);
        let mut inside = vec![false; n];
        inside[first] = true;
        for &v in vs {
            let mut u = v;
            while !inside[u] {
                inside[u] = true;
                u = parent[u];
            }
        }
        Ok((0..n).filter(|&u| inside[u]).collect())
    }

    /// Distances from `src` to every vertex.
    pub fn distances_from(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.adj.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_trees() {
        assert!(Tree::from_edges(3, &[(0, 1)]).is_err());
        assert!(Tree::from_edges(4, &[(0, 1), (1, 0), (2, 3)]).is_err());
        assert!(Tree::from_edges(2, &[(0, 5)]).is_err());
    }

    #[test]
    fn centroids_of_paths() {
        assert_eq!(Tree::path(5).centroids(), vec![2]);
        assert_eq!(Tree::path(4).centroids(), vec![1, 2]);
        assert_eq!(Tree::star(6).centroids(), vec![0]);
    }

    #[test]
    fn codes_separate_path_and_star() {
        assert_ne!(Tree::path(4).canonical_code(), Tree::star(4).canonical_code());
        let relabeled = Tree::from_edges(4, &[(3, 1), (1, 0), (0, 2)]).unwrap();
        assert_eq!(relabeled.canonical_code(), Tree::path(4).canonical_code());
    }

    #[test]
    fn span_examples() {
        let star = Tree::star(4);
        assert_eq!(star.span(&[1, 2]).unwrap(), vec![0, 1, 2]);
        assert_eq!(Tree::path(5).span(&[0, 4]).unwrap().len(), 5);
        assert_eq!(Tree::path(5).span(&[3]).unwrap(), vec![3]);
        assert!(star.span(&[9]).is_err());
    }
}
