use std::cmp::Ordering;
use std::fmt;

use serde_json::Value;

use super::free::Tree;
use crate::error::{structure, Error, Result};

/// Unordered tree whose vertices carry positive integer labels.
///
/// Equality and ordering go through the labeled canonical code; the order is
/// (weight, size, code), a linear extension of the precedence relation used
/// by the observables.
#[derive(Clone, Debug)]
pub struct DecoratedTree {
    tree: Tree,
    labels: Vec<u32>,
    code: String,
}

impl DecoratedTree {
    pub fn new(tree: Tree, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != tree.num_vertices() {
            return Err(structure(format!(
                "{} labels for {} vertices",
                labels.len(),
                tree.num_vertices()
            )));
        }
        if labels.contains(&0) {
            return Err(structure("labels must be positive"));
        }
        let code = tree.centered_code(Some(&labels));
        Ok(DecoratedTree { tree, labels, code })
    }

    pub fn vertex(label: u32) -> Result<Self> {
        Self::new(Tree::single_vertex(), vec![label])
    }

    /// Labels each vertex of `tree` by its degree.
    pub fn degree_labeled(tree: &Tree) -> Result<Self> {
        let labels = tree.degrees().into_iter().map(|d| d as u32).collect();
        Self::new(tree.clone(), labels)
    }

    /// Parses the code syntax, e.g. `(3(1)(1)(1))`.
    pub fn parse(text: &str) -> Result<Self> {
        let b = text.as_bytes();
        let perr = |position: usize, message: &str| Error::Parse { position, message: message.into() };
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut i = 0;
        let mut closed = false;
        while i < b.len() {
            if closed {
                return Err(perr(i, "trailing input after the root closed"));
            }
            match b[i] {
                b'(' => {
                    let start = i + 1;
                    let mut j = start;
                    while j < b.len() && b[j].is_ascii_digit() {
                        j += 1;
                    }
                    let label: u32 = text[start..j].parse().map_err(|_| perr(start, "expected a label"))?;
                    let id = labels.len();
                    labels.push(label);
                    if let Some(&p) = stack.last() {
                        edges.push((p, id));
                    }
                    stack.push(id);
                    i = j;
                }
                b')' => {
                    stack.pop().ok_or_else(|| perr(i, "unmatched ')'"))?;
                    closed = stack.is_empty();
                    i += 1;
                }
                _ => return Err(perr(i, "unexpected character")),
            }
        }
        if labels.is_empty() {
            return Err(perr(0, "empty input"));
        }
        if !stack.is_empty() {
            return Err(perr(b.len(), "unclosed '('"));
        }
        Self::new(Tree::from_edges(labels.len(), &edges)?, labels)
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, u: usize) -> u32 {
        self.labels[u]
    }

    pub fn weight(&self) -> u32 {
        self.labels.iter().sum()
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    /// Copy with vertex `u` relabeled.
    pub fn relabeled(&self, u: usize, label: u32) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels[u] = label;
        Self::new(self.tree.clone(), labels)
    }

    /// Copy with leaf `u` removed and, optionally, its neighbor relabeled.
    pub fn without_leaf(&self, u: usize, neighbor_label: Option<u32>) -> Result<Self> {
        if self.tree.degree(u) != 1 || self.size() < 2 {
            return Err(structure(format!("vertex {u} is not a leaf")));
        }
        let a = self.tree.neighbors(u)[0];
        let keep: Vec<usize> = (0..self.size()).filter(|&v| v != u).collect();
        let mut new_id = vec![usize::MAX; self.size()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let edges: Vec<_> = self
            .tree
            .edges()
            .filter(|&(x, y)| x != u && y != u)
            .map(|(x, y)| (new_id[x], new_id[y]))
            .collect();
        let mut labels: Vec<u32> = keep.iter().map(|&v| self.labels[v]).collect();
        if let Some(l) = neighbor_label {
            labels[new_id[a]] = l;
        }
        Self::new(Tree::from_edges(keep.len(), &edges)?, labels)
    }

    /// Nested JSON `{"label": int, "children": [...]}` rooted at vertex 0.
    pub fn to_json(&self) -> Value {
        let parent = self.tree.parents_from(0);
        fn node(d: &DecoratedTree, parent: &[usize], v: usize) -> Value {
            let kids: Vec<Value> = d
                .tree
                .neighbors(v)
                .iter()
                .filter(|&&w| parent[w] == v && w != v)
                .map(|&w| node(d, parent, w))
                .collect();
            serde_json::json!({ "label": d.labels[v], "children": kids })
        }
        node(self, &parent, 0)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut stack: Vec<(&Value, Option<usize>)> = vec![(value, None)];
        while let Some((node, parent)) = stack.pop() {
            let label = node
                .get("label")
                .and_then(Value::as_u64)
                .ok_or_else(|| structure("decorated node needs an integer 'label'"))?;
            let id = labels.len();
            labels.push(u32::try_from(label).map_err(|_| structure("label out of range"))?);
            if let Some(p) = parent {
                edges.push((p, id));
            }
            let kids = node
                .get("children")
                .and_then(Value::as_array)
                .ok_or_else(|| structure("decorated node needs a 'children' array"))?;
            stack.extend(kids.iter().map(|k| (k, Some(id))));
        }
        Self::new(Tree::from_edges(labels.len(), &edges)?, labels)
    }
}

impl PartialEq for DecoratedTree {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for DecoratedTree {}

impl Ord for DecoratedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.weight(), self.size(), &self.code).cmp(&(other.weight(), other.size(), &other.code))
    }
}

impl PartialOrd for DecoratedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::hash::Hash for DecoratedTree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}
