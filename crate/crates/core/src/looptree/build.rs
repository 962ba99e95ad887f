use super::Looptree;
use crate::error::{param, structure, Error, Result};
use crate::tree_core::PlaneTree;

/// Loop of a plane tree.
///
/// Vertex ids: the edge to child `v` becomes vertex `v - 1` for a
/// non-planted tree and `v` for a planted one (the plant is vertex 0).
/// Edges are listed in corner order, vertex by vertex and slot by slot.
pub fn loop_tree(t: &PlaneTree) -> Result<Looptree> {
    if t.corner_count() == 0 {
        return Err(structure("a single non-planted vertex has no looptree"));
    }
    let shift = usize::from(!t.is_planted());
    let num_vertices = t.num_edges() + usize::from(t.is_planted());
    let mut edges = Vec::with_capacity(t.corner_count());
    for v in 0..t.num_vertices() {
        let d = t.degree(v);
        for s in 0..d {
            edges.push((t.half_edge(v, s) - shift, t.half_edge(v, (s + 1) % d) - shift));
        }
    }
    Looptree::new(num_vertices, edges)
}

/// Loop of a planted tree, built by ending the plant at a new leaf and
/// deleting the new leaf's self-loop.  Vertex ids match [`loop_tree`].
pub fn loop_planted(t: &PlaneTree) -> Result<Looptree> {
    let completed = t.completed_plant()?;
    let full = loop_tree(&completed)?;
    // The new leaf is the root of the completion, so its cycle comes first.
    debug_assert_eq!(full.edges()[0], (0, 0));
    Looptree::new(full.num_vertices(), full.edges()[1..].to_vec())
}

/// Loop of a planted tree cut open at the plant vertex.
///
/// The plant vertex keeps id 0 as mark `g`, attached to the edge of the
/// corner following the plant; the new vertex `d` takes the edge of the
/// corner preceding it.
pub fn modified_loop(t: &PlaneTree) -> Result<Looptree> {
    let lt = loop_planted(t)?;
    let d = lt.num_vertices();
    let root_degree = t.degree(0);
    let mut edges = lt.edges().to_vec();
    // The root's cycle is listed first, starting at the plant.
    let last = &mut edges[root_degree - 1];
    debug_assert_eq!(last.1, 0);
    last.1 = d;
    Looptree::new(d + 1, edges)?.with_mark("g", 0)?.with_mark("d", d)
}

/// Replaces each corner edge of the seed's looptree by a part, identifying
/// the part's `g` and `d` with the seed-edge vertices before and after the
/// corner.  Parts are matched to corners in enumeration order.
pub fn glue_on_seed(seed: &PlaneTree, parts: &[Looptree]) -> Result<Looptree> {
    if seed.is_planted() || seed.num_vertices() < 2 {
        return Err(param("gluing needs a non-planted seed with at least 2 vertices"));
    }
    let base = loop_tree(seed)?;
    if parts.len() != base.num_edges() {
        return Err(param(format!("{} parts for {} corners", parts.len(), base.num_edges())));
    }
    let mut next = base.num_vertices();
    let mut edges = Vec::new();
    for (&(before, after), part) in base.edges().iter().zip(parts) {
        let g = part.mark("g").ok_or_else(|| structure("part lacks mark 'g'"))?;
        let d = part.mark("d").ok_or_else(|| structure("part lacks mark 'd'"))?;
        if g == d {
            return Err(Error::Structure("marks 'g' and 'd' coincide".into()));
        }
        let map: Vec<usize> = (0..part.num_vertices())
            .map(|v| {
                if v == g {
                    before
                } else if v == d {
                    after
                } else {
                    next += 1;
                    next - 1
                }
            })
            .collect();
        edges.extend(part.edges().iter().map(|&(a, b)| (map[a], map[b])));
    }
    Looptree::new(next, edges)
}
