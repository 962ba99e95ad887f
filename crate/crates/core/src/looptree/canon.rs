use std::collections::VecDeque;
use std::fmt;

use super::Looptree;
use crate::error::{guard, structure, Result};

/// Canonical form of a looptree up to multigraph isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LooptreeCode(pub String);

impl fmt::Display for LooptreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum BlockKind {
    Bridge,
    Cycle,
}

/// A biconnected block; cycle vertices are listed in cyclic order.
#[derive(Clone, Debug)]
pub(crate) struct Block {
    pub kind: BlockKind,
    pub vertices: Vec<usize>,
}

pub(crate) struct Blocks {
    pub blocks: Vec<Block>,
    pub self_loops: Vec<usize>,
}

/// Splits a cactus multigraph into bridges and cycles (self-loops are
/// counted per vertex).  Fails if some block is neither.
pub(crate) fn blocks(lt: &Looptree) -> Result<Blocks> {
    let n = lt.num_vertices();
    let mut self_loops = vec![0usize; n];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in lt.edges().iter().enumerate() {
        if a == b {
            self_loops[a] += 1;
        } else {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if disc[start] != usize::MAX {
            continue;
        }
        disc[start] = timer;
        low[start] = timer;
        timer += 1;
        let mut stack: Vec<(usize, usize, usize)> = vec![(start, usize::MAX, 0)];
        while let Some(frame) = stack.last_mut() {
            let (v, parent_edge, i) = *frame;
            if i < adj[v].len() {
                frame.2 += 1;
                let (w, e) = adj[v][i];
                if e == parent_edge {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push(e);
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut comp = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            comp.push(e);
                            if e == parent_edge {
                                break;
                            }
                        }
                        components.push(comp);
                    }
                }
            }
        }
    }
    let blocks = components
        .into_iter()
        .map(|comp| classify(lt, &comp))
        .collect::<Result<Vec<_>>>()?;
    Ok(Blocks { blocks, self_loops })
}

fn classify(lt: &Looptree, comp: &[usize]) -> Result<Block> {
    let edges: Vec<(usize, usize)> = comp.iter().map(|&e| lt.edges()[e]).collect();
    if edges.len() == 1 {
        let (a, b) = edges[0];
        return Ok(Block { kind: BlockKind::Bridge, vertices: vec![a, b] });
    }
    let mut verts: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    let local = |v: usize| verts.binary_search(&v).expect("endpoint of the block");
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        inc[local(a)].push(i);
        inc[local(b)].push(i);
    }
    if edges.len() != verts.len() || inc.iter().any(|l| l.len() != 2) {
        return Err(structure("multigraph is not a cactus (a block is neither a bridge nor a cycle)"));
    }
    let mut order = Vec::with_capacity(verts.len());
    let mut v = verts[0];
    let mut came_by = usize::MAX;
    for _ in 0..verts.len() {
        order.push(v);
        let l = &inc[local(v)];
        let e = if l[0] != came_by { l[0] } else { l[1] };
        let (a, b) = edges[e];
        v = if a == v { b } else { a };
        came_by = e;
    }
    Ok(Block { kind: BlockKind::Cycle, vertices: order })
}

fn min_rotation(seq: &[String]) -> Vec<&String> {
    let m = seq.len();
    let mut best: Option<Vec<&String>> = None;
    for start in 0..m {
        for dir in [false, true] {
            let cand: Vec<&String> = (0..m)
                .map(|k| if dir { &seq[(start + m - k) % m] } else { &seq[(start + k) % m] })
                .collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

fn join(parts: &[&String]) -> String {
    parts.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(",")
}

pub(crate) fn canonical_form(lt: &Looptree, with_marks: bool) -> Result<LooptreeCode> {
    let n = lt.num_vertices();
    if n == 0 {
        return Ok(LooptreeCode("empty".into()));
    }
    if !lt.is_connected() {
        return Err(structure("looptree is not connected"));
    }
    let Blocks { blocks, self_loops } = blocks(lt)?;
    let mut mark_names: Vec<Vec<&str>> = vec![Vec::new(); n];
    if with_marks {
        for (name, &v) in lt.marks() {
            mark_names[v].push(name);
        }
    }
    let deco: Vec<String> = (0..n)
        .map(|v| {
            if mark_names[v].is_empty() {
                format!("V{}", self_loops[v])
            } else {
                format!("V{}{{{}}}", self_loops[v], mark_names[v].join(";"))
            }
        })
        .collect();
    // Block-cut tree: nodes 0..n are vertices, n.. are blocks.
    let total = n + blocks.len();
    let mut bct: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (i, b) in blocks.iter().enumerate() {
        for &v in &b.vertices {
            bct[v].push(n + i);
            bct[n + i].push(v);
        }
    }
    let far = |src: usize| -> (usize, Vec<usize>) {
        let mut dist = vec![usize::MAX; total];
        let mut par = vec![usize::MAX; total];
        dist[src] = 0;
        let mut q = VecDeque::from([src]);
        let mut last = src;
        while let Some(u) = q.pop_front() {
            last = u;
            for &w in &bct[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    par[w] = u;
                    q.push_back(w);
                }
            }
        }
        (last, par)
    };
    let (a, _) = far(0);
    let (b, par) = far(a);
    let mut path = vec![b];
    while *path.last().expect("nonempty") != a {
        path.push(par[*path.last().expect("nonempty")]);
    }
    let len = path.len() - 1;
    let centers = if len % 2 == 0 { vec![path[len / 2]] } else { vec![path[len / 2], path[len / 2 + 1]] };
    let code = centers
        .into_iter()
        .map(|c| rooted_code(c, n, &bct, &blocks, &deco))
        .min()
        .expect("at least one center");
    Ok(LooptreeCode(code))
}

fn rooted_code(root: usize, n: usize, bct: &[Vec<usize>], blocks: &[Block], deco: &[String]) -> String {
    let total = bct.len();
    let mut parent = vec![usize::MAX; total];
    let mut order = Vec::with_capacity(total);
    let mut seen = vec![false; total];
    seen[root] = true;
    let mut q = VecDeque::from([root]);
    while let Some(u) = q.pop_front() {
        order.push(u);
        for &w in &bct[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                q.push_back(w);
            }
        }
    }
    let mut code: Vec<String> = vec![String::new(); total];
    for &u in order.iter().rev() {
        if u < n {
            let mut kids: Vec<&String> = bct[u].iter().filter(|&&w| parent[w] == u).map(|&w| &code[w]).collect();
            kids.sort();
            code[u] = format!("{}[{}]", deco[u], join(&kids));
            continue;
        }
        let block = &blocks[u - n];
        let tag = match block.kind {
            BlockKind::Bridge => "B",
            BlockKind::Cycle => "C",
        };
        let vs = &block.vertices;
        let m = vs.len();
        code[u] = if parent[u] == usize::MAX {
            let seq: Vec<String> = vs.iter().map(|&v| code[v].clone()).collect();
            let best = if block.kind == BlockKind::Bridge {
                let mut s: Vec<&String> = seq.iter().collect();
                s.sort();
                s
            } else {
                min_rotation(&seq)
            };
            format!("{tag}*({})", join(&best))
        } else {
            let top = vs.iter().position(|&v| v == parent[u]).expect("parent vertex lies on its block");
            let fwd: Vec<&String> = (1..m).map(|k| &code[vs[(top + k) % m]]).collect();
            let bwd: Vec<&String> = fwd.iter().rev().copied().collect();
            format!("{tag}({})", join(if fwd <= bwd { &fwd } else { &bwd }))
        };
    }
    std::mem::take(&mut code[root])
}

/// Exhaustive isomorphism test over all vertex bijections (tiny inputs).
pub fn brute_force_isomorphic(a: &Looptree, b: &Looptree, with_marks: bool) -> Result<bool> {
    let n = a.num_vertices();
    if n > 8 {
        return Err(guard("brute-force isomorphism is limited to 8 vertices"));
    }
    if n != b.num_vertices() || a.num_edges() != b.num_edges() {
        return Ok(false);
    }
    if with_marks && a.marks().keys().ne(b.marks().keys()) {
        return Ok(false);
    }
    let target = b.edge_multiset();
    let mut perm: Vec<usize> = (0..n).collect();
    let check = |p: &[usize]| {
        if with_marks && a.marks().iter().any(|(k, &v)| b.mark(k) != Some(p[v])) {
            return false;
        }
        let mut mapped: Vec<(usize, usize)> =
            a.edges().iter().map(|&(x, y)| (p[x].min(p[y]), p[x].max(p[y]))).collect();
        mapped.sort_unstable();
        mapped == target
    };
    // Heap's algorithm.
    let mut c = vec![0usize; n];
    if check(&perm) {
        return Ok(true);
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if check(&perm) {
                return Ok(true);
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lt(n: usize, edges: &[(usize, usize)]) -> Looptree {
        Looptree::new(n, edges.to_vec()).unwrap()
    }

    #[test]
    fn block_kinds() {
        let g = lt(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 3), (0, 1)]);
        assert!(blocks(&g).is_err());
        let g = lt(4, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 3), (3, 3)]);
        let b = blocks(&g).unwrap();
        assert_eq!(b.self_loops, vec![0, 0, 0, 2]);
        assert_eq!(b.blocks.iter().filter(|x| x.kind == BlockKind::Cycle).count(), 1);
        assert_eq!(b.blocks.iter().filter(|x| x.kind == BlockKind::Bridge).count(), 1);
    }

    #[test]
    fn relabeling_preserves_code() {
        let a = lt(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 2), (3, 4), (4, 4)]);
        let b = lt(5, &[(4, 3), (3, 2), (2, 4), (2, 1), (1, 2), (1, 0), (0, 0)]);
        assert_eq!(a.canonical_form(false).unwrap(), b.canonical_form(false).unwrap());
        let c = lt(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 2), (3, 4), (3, 3)]);
        assert_ne!(a.canonical_form(false).unwrap(), c.canonical_form(false).unwrap());
    }

    #[test]
    fn marks_matter_only_when_requested() {
        let a = lt(3, &[(0, 1), (1, 2)]).with_mark("g", 0).unwrap();
        let b = lt(3, &[(0, 1), (1, 2)]).with_mark("g", 1).unwrap();
        assert_eq!(a.canonical_form(false).unwrap(), b.canonical_form(false).unwrap());
        assert_ne!(a.canonical_form(true).unwrap(), b.canonical_form(true).unwrap());
        assert!(!brute_force_isomorphic(&a, &b, true).unwrap());
        assert!(brute_force_isomorphic(&a, &b, false).unwrap());
    }
}
