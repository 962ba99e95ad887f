use std::collections::VecDeque;

use super::canon::{blocks, BlockKind};
use super::Looptree;
use crate::error::{structure, Result};
use crate::tree_core::PlaneTree;

/// A cycle with arc lengths: `arcs[i]` joins `vertices[i]` to
/// `vertices[(i + 1) % m]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCycle {
    pub vertices: Vec<usize>,
    pub arcs: Vec<f64>,
}

impl WeightedCycle {
    pub fn length(&self) -> f64 {
        self.arcs.iter().sum()
    }
}

/// Metric graph in which every block is a cycle: looptrees and the
/// discretized line-breaking construction.  A bridge of length `l` is stored
/// as a two-vertex cycle with both arcs `l`, which has the same vertex
/// metric.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricCactus {
    num_vertices: usize,
    cycles: Vec<WeightedCycle>,
}

impl MetricCactus {
    pub fn new(num_vertices: usize, cycles: Vec<WeightedCycle>) -> Result<Self> {
        for c in &cycles {
            if c.vertices.len() != c.arcs.len() || c.vertices.is_empty() {
                return Err(structure("cycle needs one arc per vertex"));
            }
            if c.vertices.iter().any(|&v| v >= num_vertices) {
                return Err(structure("cycle vertex out of range"));
            }
            if c.arcs.iter().any(|&a| !a.is_finite() || a < 0.0) {
                return Err(structure("arc lengths must be finite and nonnegative"));
            }
        }
        Ok(MetricCactus { num_vertices, cycles })
    }

    /// Unit-length cycles around every tree vertex of degree at least 2.
    pub fn from_plane_tree(t: &PlaneTree) -> Result<Self> {
        if t.corner_count() == 0 {
            return Err(structure("a single non-planted vertex has no looptree"));
        }
        let shift = usize::from(!t.is_planted());
        let n = t.num_edges() + usize::from(t.is_planted());
        let cycles = (0..t.num_vertices())
            .filter(|&v| t.degree(v) >= 2)
            .map(|v| {
                let vertices: Vec<usize> = (0..t.degree(v)).map(|i| t.half_edge(v, i) - shift).collect();
                let arcs = vec![1.0; vertices.len()];
                WeightedCycle { vertices, arcs }
            })
            .collect();
        Ok(MetricCactus { num_vertices: n, cycles })
    }

    pub fn from_looptree(lt: &Looptree) -> Result<Self> {
        let b = blocks(lt)?;
        let cycles = b
            .blocks
            .into_iter()
            .map(|blk| {
                let arcs = vec![1.0; blk.vertices.len()];
                match blk.kind {
                    BlockKind::Bridge | BlockKind::Cycle => WeightedCycle { vertices: blk.vertices, arcs },
                }
            })
            .collect();
        MetricCactus::new(lt.num_vertices(), cycles)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn cycles(&self) -> &[WeightedCycle] {
        &self.cycles
    }

    pub fn total_length(&self) -> f64 {
        self.cycles.iter().map(WeightedCycle::length).sum()
    }

    /// Cycles in discovery order from vertex 0, each rotated so that its
    /// first vertex is the one closest to vertex 0.
    fn rooted_cycles(&self) -> Result<Vec<(usize, usize)>> {
        let n = self.num_vertices;
        let mut at: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, c) in self.cycles.iter().enumerate() {
            for &v in &c.vertices {
                at[v].push(i);
            }
        }
        let mut seen_v = vec![false; n];
        let mut seen_c = vec![false; self.cycles.len()];
        let mut order = Vec::with_capacity(self.cycles.len());
        if n == 0 {
            return Ok(order);
        }
        seen_v[0] = true;
        let mut q = VecDeque::from([0usize]);
        while let Some(x) = q.pop_front() {
            for &ci in &at[x] {
                if std::mem::replace(&mut seen_c[ci], true) {
                    continue;
                }
                let vs = &self.cycles[ci].vertices;
                let top = vs.iter().position(|&v| v == x).expect("cycle passes through x");
                order.push((ci, top));
                for k in 1..vs.len() {
                    let y = vs[(top + k) % vs.len()];
                    if y == x {
                        continue;
                    }
                    if std::mem::replace(&mut seen_v[y], true) {
                        return Err(structure("metric graph is not a cactus"));
                    }
                    q.push_back(y);
                }
            }
        }
        if seen_v.iter().any(|s| !s) {
            return Err(structure("metric graph is not connected"));
        }
        Ok(order)
    }

    /// Largest distance between two vertices, in linear time.
    pub fn diameter(&self) -> Result<f64> {
        let order = self.rooted_cycles()?;
        let mut height = vec![0.0f64; self.num_vertices];
        let mut best = 0.0f64;
        let mut pos: Vec<f64> = Vec::new();
        let mut hs: Vec<f64> = Vec::new();
        let mut window: VecDeque<usize> = VecDeque::new();
        for &(ci, top) in order.iter().rev() {
            let c = &self.cycles[ci];
            let m = c.vertices.len();
            if m < 2 {
                continue;
            }
            let x = c.vertices[top];
            let total = c.length();
            // Positions of the non-top vertices, measured from x.
            pos.clear();
            hs.clear();
            let mut p = 0.0;
            for k in 1..m {
                p += c.arcs[(top + k - 1) % m];
                pos.push(p);
                hs.push(height[c.vertices[(top + k) % m]]);
            }
            let up = (0..m - 1)
                .map(|j| hs[j] + pos[j].min(total - pos[j]))
                .fold(f64::NEG_INFINITY, f64::max);
            // Pairs of non-top vertices: slide over two laps, keeping the
            // candidates within half a lap that maximize h - position.
            let k = m - 1;
            window.clear();
            let at = |t: usize| (hs[t % k], pos[t % k] + if t >= k { total } else { 0.0 });
            for t in 0..2 * k {
                let (ht, pt) = at(t);
                while let Some(&s) = window.front() {
                    if s + k <= t || pt - at(s).1 > total / 2.0 {
                        window.pop_front();
                    } else {
                        break;
                    }
                }
                if let Some(&s) = window.front() {
                    let (hs_, ps) = at(s);
                    best = best.max(ht + hs_ + pt - ps);
                }
                while let Some(&s) = window.back() {
                    let (hs_, ps) = at(s);
                    if hs_ - ps <= ht - pt {
                        window.pop_back();
                    } else {
                        break;
                    }
                }
                window.push_back(t);
            }
            best = best.max(height[x] + up);
            height[x] = height[x].max(up);
        }
        Ok(best)
    }

    /// Distances from `src` (Dijkstra), for checks on small instances.
    pub fn distances_from(&self, src: usize) -> Vec<f64> {
        let n = self.num_vertices;
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for c in &self.cycles {
            let m = c.vertices.len();
            for i in 0..m {
                let (a, b) = (c.vertices[i], c.vertices[(i + 1) % m]);
                if a != b {
                    adj[a].push((b, c.arcs[i]));
                    adj[b].push((a, c.arcs[i]));
                }
            }
        }
        let mut dist = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        dist[src] = 0.0;
        let mut heap = std::collections::BinaryHeap::new();
        heap.push(std::cmp::Reverse((OrdF64(0.0), src)));
        while let Some(std::cmp::Reverse((OrdF64(d), u))) = heap.pop() {
            if std::mem::replace(&mut done[u], true) {
                continue;
            }
            for &(w, l) in &adj[u] {
                if d + l < dist[w] {
                    dist[w] = d + l;
                    heap.push(std::cmp::Reverse((OrdF64(d + l), w)));
                }
            }
        }
        dist
    }

    /// Diameter by all-pairs Dijkstra.
    pub fn diameter_brute_force(&self) -> f64 {
        (0..self.num_vertices)
            .flat_map(|s| self.distances_from(s))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug)]
struct OrdF64(f64);

impl PartialEq for OrdF64 {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cycles() {
        let c = MetricCactus::new(4, vec![WeightedCycle { vertices: vec![0, 1, 2, 3], arcs: vec![1.0; 4] }]).unwrap();
        assert_eq!(c.diameter().unwrap(), 2.0);
        let c = MetricCactus::new(3, vec![WeightedCycle { vertices: vec![0, 1, 2], arcs: vec![1.0, 1.0, 5.0] }])
            .unwrap();
        assert_eq!(c.diameter().unwrap(), 2.0);
    }

    #[test]
    fn path_of_bridges() {
        let lt = Looptree::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 3)]).unwrap();
        assert_eq!(lt.to_cactus().unwrap().diameter().unwrap(), 3.0);
    }

    #[test]
    fn matches_tree_looptree_builder() {
        let t = PlaneTree::parse("((()())(()()()))", false).unwrap();
        let a = MetricCactus::from_plane_tree(&t).unwrap();
        let b = super::super::loop_tree(&t).unwrap().to_cactus().unwrap();
        assert_eq!(a.diameter().unwrap(), b.diameter().unwrap());
        assert_eq!(a.diameter().unwrap(), a.diameter_brute_force());
    }
}
