//! Plane, planted, unordered and decorated trees.

mod decorated;
mod free;
mod plane;

use std::collections::BTreeMap;

pub use decorated::DecoratedTree;
pub use free::{AbstractTreeCode, Tree};
pub use plane::{Corner, CornerKey, PlaneTree};

use crate::error::{guard, Result};

pub fn parse_tree(text: &str, planted: bool) -> Result<PlaneTree> {
    PlaneTree::parse(text, planted)
}

pub fn serialize_tree(t: &PlaneTree) -> String {
    t.serialize()
}

pub fn graft(t: &PlaneTree, c: Corner) -> Result<PlaneTree> {
    t.grafted(c)
}

pub fn canonical_code(t: &PlaneTree) -> AbstractTreeCode {
    t.canonical_code()
}

pub fn span(t: &PlaneTree, vs: &[usize]) -> Result<PlaneTree> {
    Ok(t.span(vs)?.0)
}

pub const MAX_ENUMERATION_SIZE: usize = 10;

/// Every unlabeled tree on `n` vertices, keyed by canonical code.
pub fn enumerate_abstract_trees(n: usize) -> Result<BTreeMap<AbstractTreeCode, Tree>> {
    if !(1..=MAX_ENUMERATION_SIZE).contains(&n) {
        return Err(guard(format!("tree enumeration needs 1 <= n <= {MAX_ENUMERATION_SIZE}, got {n}")));
    }
    let mut level = BTreeMap::from([(Tree::single_vertex().canonical_code(), Tree::single_vertex())]);
    for _ in 1..n {
        let mut next = BTreeMap::new();
        for t in level.values() {
            for v in 0..t.num_vertices() {
                let g = t.with_leaf(v);
                next.entry(g.canonical_code()).or_insert(g);
            }
        }
        level = next;
    }
    Ok(level)
}
