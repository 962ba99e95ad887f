use super::Looptree;
use crate::error::{structure, Error, Result};
use crate::growth::LabeledBinaryTree;
use crate::tree_core::Tree;

/// A tree with an ordered list of distinct marked leaves `x_0, ..., x_n`.
#[derive(Clone, Debug)]
pub struct LabeledDiscreteTree {
    tree: Tree,
    marked: Vec<usize>,
}

impl LabeledDiscreteTree {
    pub fn new(tree: Tree, marked: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; tree.num_vertices()];
        for &x in &marked {
            if x >= tree.num_vertices() {
                return Err(Error::UnknownVertex(x));
            }
            if tree.degree(x) != 1 {
                return Err(structure(format!("marked vertex {x} is not a leaf")));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(structure(format!("vertex {x} is marked twice")));
            }
        }
        if marked.is_empty() {
            return Err(structure("at least x_0 must be marked"));
        }
        Ok(LabeledDiscreteTree { tree, marked })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    /// `x_i`'s closest point `p_i` on the span of the earlier marks, for
    /// `i = 1..=n`.
    pub fn projections(&self) -> Vec<usize> {
        let n = self.tree.num_vertices();
        let parent = self.tree.parents_from(self.marked[0]);
        let mut in_span = vec![false; n];
        in_span[self.marked[0]] = true;
        let mut out = Vec::with_capacity(self.marked.len().saturating_sub(1));
        for &x in &self.marked[1..] {
            let mut u = x;
            while !in_span[u] {
                in_span[u] = true;
                u = parent[u];
            }
            out.push(u);
        }
        out
    }
}

impl From<&LabeledBinaryTree> for LabeledDiscreteTree {
    fn from(b: &LabeledBinaryTree) -> Self {
        LabeledDiscreteTree { tree: b.to_tree(), marked: b.leaves().to_vec() }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Glu quotient, plus the class (looptree vertex) of every tree vertex.
///
/// Classes are numbered by their smallest tree vertex.
pub fn glu_discrete_with_classes(lt: &LabeledDiscreteTree) -> Result<(Looptree, Vec<usize>)> {
    let tree = lt.tree();
    if tree.num_edges() == 0 {
        return Err(structure("gluing needs a tree with an edge"));
    }
    let n = tree.num_vertices();
    let mut uf: Vec<usize> = (0..n).collect();
    for (&x, p) in lt.marked()[1..].iter().zip(lt.projections()) {
        let (a, b) = (find(&mut uf, x), find(&mut uf, p));
        uf[a.max(b)] = a.min(b);
    }
    let mut class_id = vec![usize::MAX; n];
    let mut count = 0;
    let class: Vec<usize> = (0..n)
        .map(|v| {
            let r = find(&mut uf, v);
            if class_id[r] == usize::MAX {
                class_id[r] = count;
                count += 1;
            }
            class_id[r]
        })
        .collect();
    let edges = tree.edges().map(|(a, b)| (class[a], class[b])).collect();
    Ok((Looptree::new(count, edges)?, class))
}

pub fn glu_discrete(lt: &LabeledDiscreteTree) -> Result<Looptree> {
    Ok(glu_discrete_with_classes(lt)?.0)
}
