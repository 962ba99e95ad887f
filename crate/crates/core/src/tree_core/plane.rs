use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::free::{AbstractTreeCode, Tree};
use crate::error::{structure, Error, Result};

/// An angular sector at `vertex`: the one following half-edge `slot` in
/// the cyclic order `[up-edge, children...]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Corner {
    pub vertex: usize,
    pub slot: usize,
}

/// Position-independent corner name: the half-edge that precedes it.
///
/// Half-edges are named by edge ids, and an edge is named by its lower
/// (child) endpoint; the plant of a planted tree is edge 0.  Keys survive
/// later grafts, slots do not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CornerKey {
    pub vertex: usize,
    pub after: usize,
}

/// Rooted ordered tree, optionally planted at its root.
///
/// The root is vertex 0, and every parent has a smaller id than its
/// children.  When planted, the plant occupies half-edge position 0 at the
/// root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneTree {
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    planted: bool,
}

const NO_PARENT: usize = usize::MAX;

impl PlaneTree {
    pub fn single_vertex() -> Self {
        PlaneTree { parent: vec![NO_PARENT], children: vec![Vec::new()], planted: false }
    }

    /// The one-vertex planted tree.
    pub fn planted_vertex() -> Self {
        PlaneTree { planted: true, ..Self::single_vertex() }
    }

    pub fn path(n: usize) -> Self {
        let mut t = Self::single_vertex();
        for v in 1..n.max(1) {
            t.push_child(v - 1, usize::MAX);
        }
        t
    }

    pub fn star(n: usize) -> Self {
        let mut t = Self::single_vertex();
        for _ in 1..n.max(1) {
            t.push_child(0, usize::MAX);
        }
        t
    }

    /// Appends a new vertex as child of `v` at child index `pos` (clamped).
    fn push_child(&mut self, v: usize, pos: usize) -> usize {
        let id = self.parent.len();
        self.parent.push(v);
        self.children.push(Vec::new());
        let kids = &mut self.children[v];
        let pos = pos.min(kids.len());
        kids.insert(pos, id);
        id
    }

    /// Some plane embedding of `t`, rooted at `root`, children in
    /// adjacency order.  Vertices are renumbered in breadth-first order.
    pub fn from_tree(t: &Tree, root: usize) -> Result<PlaneTree> {
        if root >= t.num_vertices() {
            return Err(Error::UnknownVertex(root));
        }
        let order = t.bfs_order(root);
        let parent = t.parents_from(root);
        let mut new_id = vec![0usize; t.num_vertices()];
        let mut out = PlaneTree::single_vertex();
        for &v in order.iter().skip(1) {
            new_id[v] = out.push_child(new_id[parent[v]], usize::MAX);
        }
        Ok(out)
    }

    pub fn num_vertices(&self) -> usize {
        self.parent.len()
    }

    pub fn num_edges(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn is_planted(&self) -> bool {
        self.planted
    }

    /// Root corner occupied by the plant (always slot 0 when planted).
    pub fn plant_corner(&self) -> Option<Corner> {
        self.planted.then_some(Corner { vertex: 0, slot: 0 })
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (self.parent[v] != NO_PARENT).then_some(self.parent[v])
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn has_up_edge(&self, v: usize) -> bool {
        v != 0 || self.planted
    }

    pub fn degree(&self, v: usize) -> usize {
        self.children[v].len() + usize::from(self.has_up_edge(v))
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.num_vertices()).map(|v| self.degree(v)).collect()
    }

    pub fn corner_count(&self) -> usize {
        2 * self.num_edges() + usize::from(self.planted)
    }

    /// Edge id of half-edge `i` around `v`.
    pub fn half_edge(&self, v: usize, i: usize) -> usize {
        if self.has_up_edge(v) {
            if i == 0 {
                v
            } else {
                self.children[v][i - 1]
            }
        } else {
            self.children[v][i]
        }
    }

    pub fn half_edges(&self, v: usize) -> Vec<usize> {
        (0..self.degree(v)).map(|i| self.half_edge(v, i)).collect()
    }

    /// All corners, by vertex id then slot.
    pub fn corners(&self) -> impl Iterator<Item = Corner> + '_ {
        (0..self.num_vertices())
            .flat_map(move |v| (0..self.degree(v)).map(move |slot| Corner { vertex: v, slot }))
    }

    fn check_corner(&self, c: Corner) -> Result<()> {
        if c.vertex >= self.num_vertices() || c.slot >= self.degree(c.vertex) {
            return Err(Error::InvalidCorner { vertex: c.vertex, slot: c.slot });
        }
        Ok(())
    }

    pub fn corner_key(&self, c: Corner) -> Result<CornerKey> {
        self.check_corner(c)?;
        Ok(CornerKey { vertex: c.vertex, after: self.half_edge(c.vertex, c.slot) })
    }

    pub fn corner_of_key(&self, key: CornerKey) -> Result<Corner> {
        let v = key.vertex;
        if v >= self.num_vertices() {
            return Err(Error::UnknownVertex(v));
        }
        (0..self.degree(v))
            .find(|&i| self.half_edge(v, i) == key.after)
            .map(|slot| Corner { vertex: v, slot })
            .ok_or_else(|| structure(format!("edge {} is not incident to vertex {}", key.after, v)))
    }

    /// Child index at which a graft into corner `c` inserts.
    fn insertion_index(&self, c: Corner) -> usize {
        if self.has_up_edge(c.vertex) {
            c.slot
        } else {
            c.slot + 1
        }
    }

    /// Grafts a new leaf into corner `c` and returns its id.
    pub fn graft(&mut self, c: Corner) -> Result<usize> {
        self.check_corner(c)?;
        let pos = self.insertion_index(c);
        Ok(self.push_child(c.vertex, pos))
    }

    pub fn grafted(&self, c: Corner) -> Result<PlaneTree> {
        let mut t = self.clone();
        t.graft(c)?;
        Ok(t)
    }

    /// Glues a planted tree into the corner named by `key`: the part's root
    /// is merged with the corner's vertex and the part's root children are
    /// inserted, in order, right after the half-edge `key.after`.
    ///
    /// Returns the new ids of the part's vertices (the root maps to
    /// `key.vertex`).
    pub fn glue_planted(&mut self, key: CornerKey, part: &PlaneTree) -> Result<Vec<usize>> {
        if !part.planted {
            return Err(Error::NotPlanted);
        }
        let c = self.corner_of_key(key)?;
        let mut pos = self.insertion_index(c);
        let mut map = vec![usize::MAX; part.num_vertices()];
        map[0] = key.vertex;
        // Preorder visits parents first and siblings in plane order.
        for u in part.preorder().into_iter().skip(1) {
            let p = part.parent[u];
            let new = if p == 0 {
                let id = self.push_child(key.vertex, pos);
                pos += 1;
                id
            } else {
                self.push_child(map[p], usize::MAX)
            };
            map[u] = new;
        }
        Ok(map)
    }

    /// Non-planted tree obtained by ending the plant at a new leaf.
    ///
    /// The new leaf becomes the root (id 0) and every old vertex `v` gets id
    /// `v + 1`, so edge ids shift by one: the old plant becomes edge 1.
    pub fn completed_plant(&self) -> Result<PlaneTree> {
        if !self.planted {
            return Err(Error::NotPlanted);
        }
        let n = self.num_vertices();
        let mut parent = Vec::with_capacity(n + 1);
        let mut children = Vec::with_capacity(n + 1);
        parent.push(NO_PARENT);
        children.push(vec![1]);
        for v in 0..n {
            parent.push(if v == 0 { 0 } else { self.parent[v] + 1 });
            children.push(self.children[v].iter().map(|&c| c + 1).collect());
        }
        Ok(PlaneTree { parent, children, planted: false })
    }

    /// Underlying unordered tree (the plant is dropped).
    pub fn to_tree(&self) -> Tree {
        let mut adj: Vec<Vec<usize>> = self.children.clone();
        for (v, list) in adj.iter_mut().enumerate().skip(1) {
            list.push(self.parent[v]);
        }
        Tree::from_adjacency_unchecked(adj)
    }

    pub fn canonical_code(&self) -> AbstractTreeCode {
        self.to_tree().canonical_code()
    }

    /// Minimal subtree containing `vs`, rooted at its vertex closest to the
    /// root, with plane order inherited.  Also returns new-to-old ids.
    pub fn span(&self, vs: &[usize]) -> Result<(PlaneTree, Vec<usize>)> {
        let keep = self.to_tree().span(vs)?;
        let mut inside = vec![false; self.num_vertices()];
        for &v in &keep {
            inside[v] = true;
        }
        let top = *keep.iter().min().expect("span is nonempty");
        let mut out = PlaneTree::single_vertex();
        let mut old_of = vec![top];
        let mut stack = vec![(top, 0usize)];
        while let Some((old, new)) = stack.pop() {
            for &c in self.children[old].iter().rev() {
                if inside[c] {
                    let id = out.push_child(new, 0);
                    old_of.push(c);
                    stack.push((c, id));
                }
            }
        }
        Ok((out.renumbered(), renumber_map(&out, &old_of)))
    }

    /// Copy with ids reassigned in depth-first preorder.
    pub fn renumbered(&self) -> PlaneTree {
        let order = self.preorder();
        let mut new_id = vec![0usize; self.num_vertices()];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let mut parent = vec![NO_PARENT; self.num_vertices()];
        let mut children = vec![Vec::new(); self.num_vertices()];
        for &v in &order {
            if let Some(p) = self.parent(v) {
                parent[new_id[v]] = new_id[p];
            }
            children[new_id[v]] = self.children[v].iter().map(|&c| new_id[c]).collect();
        }
        PlaneTree { parent, children, planted: self.planted }
    }

    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.num_vertices());
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        order
    }

    /// Parenthesis word: each vertex is `(` + children + `)`.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(2 * self.num_vertices());
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        out.push('(');
        while let Some(top) = stack.last_mut() {
            let (v, i) = *top;
            if i < self.children[v].len() {
                top.1 += 1;
                out.push('(');
                stack.push((self.children[v][i], 0));
            } else {
                out.push(')');
                stack.pop();
            }
        }
        out
    }

    /// Parses a parenthesis word; ids follow depth-first preorder.
    pub fn parse(text: &str, planted: bool) -> Result<PlaneTree> {
        let bytes = text.as_bytes();
        let perr = |position: usize, message: &str| Error::Parse { position, message: message.into() };
        if bytes.is_empty() {
            return Err(perr(0, "empty input"));
        }
        let mut t = PlaneTree { parent: Vec::new(), children: Vec::new(), planted };
        let mut stack: Vec<usize> = Vec::new();
        let mut closed = false;
        for (pos, &b) in bytes.iter().enumerate() {
            if closed {
                return Err(perr(pos, "trailing input after the root closed"));
            }
            match b {
                b'(' => {
                    let id = t.parent.len();
                    match stack.last() {
                        Some(&p) => {
                            t.parent.push(p);
                            t.children[p].push(id);
                        }
                        None => t.parent.push(NO_PARENT),
                    }
                    t.children.push(Vec::new());
                    stack.push(id);
                }
                b')' => {
                    if stack.pop().is_none() {
                        return Err(perr(pos, "unmatched ')'"));
                    }
                    closed = stack.is_empty();
                }
                _ => return Err(perr(pos, "unexpected character")),
            }
        }
        if !stack.is_empty() {
            return Err(perr(bytes.len(), "unclosed '('"));
        }
        Ok(t)
    }

    pub fn to_json(&self) -> Value {
        fn nest(t: &PlaneTree, v: usize) -> Value {
            Value::Array(t.children[v].iter().map(|&c| nest(t, c)).collect())
        }
        serde_json::json!({ "planted": self.planted, "children": nest(self, 0) })
    }

    pub fn from_json(value: &Value) -> Result<PlaneTree> {
        let planted = value
            .get("planted")
            .and_then(Value::as_bool)
            .ok_or_else(|| structure("tree JSON needs a boolean 'planted'"))?;
        let root = value.get("children").ok_or_else(|| structure("tree JSON needs 'children'"))?;
        let mut t = PlaneTree { planted, ..PlaneTree::single_vertex() };
        let mut stack = vec![(root, 0usize)];
        while let Some((node, v)) = stack.pop() {
            let kids = node.as_array().ok_or_else(|| structure("children must be arrays"))?;
            let ids: Vec<usize> = kids.iter().map(|_| t.push_child(v, usize::MAX)).collect();
            stack.extend(kids.iter().zip(ids).rev());
        }
        Ok(t.renumbered())
    }
}

fn renumber_map(t: &PlaneTree, old_of: &[usize]) -> Vec<usize> {
    t.preorder().into_iter().map(|v| old_of[v]).collect()
}
