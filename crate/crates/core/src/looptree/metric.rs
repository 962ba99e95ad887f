use std::collections::VecDeque;

use super::Looptree;
use crate::error::{guard, structure, Error, Result};
use crate::gh_metric::FiniteMetricSpace;

/// Compressed adjacency lists of a multigraph (self-loops dropped).
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut deg = vec![0usize; n + 1];
        for &(a, b) in edges {
            if a != b {
                deg[a] += 1;
                deg[b] += 1;
            }
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n]];
        for &(a, b) in edges {
            if a != b {
                targets[fill[a]] = b as u32;
                fill[a] += 1;
                targets[fill[b]] = a as u32;
                fill[b] += 1;
            }
        }
        Adjacency { offsets, targets }
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Hop distances from `src`; unreachable vertices get `u32::MAX`.
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        self.multi_source_bfs(&[src])
    }

    /// Hop distance to the nearest of `sources`.
    pub fn multi_source_bfs(&self, sources: &[usize]) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.num_vertices()];
        let mut q = VecDeque::with_capacity(self.num_vertices());
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                q.push_back(s as u32);
            }
        }
        while let Some(u) = q.pop_front() {
            let du = dist[u as usize];
            for &w in self.neighbors(u as usize) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }
}

/// Distance rows from a few centers.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricRows {
    pub centers: Vec<usize>,
    pub rows: Vec<Vec<u32>>,
}

impl MetricRows {
    /// CSV with columns `center,vertex,distance`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("center,vertex,distance\n");
        for (c, row) in self.centers.iter().zip(&self.rows) {
            for (v, d) in row.iter().enumerate() {
                out.push_str(&format!("{c},{v},{d}\n"));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum PathMetric {
    Full(FiniteMetricSpace),
    Rows(MetricRows),
}

/// Largest looptree for which a full distance table is built.
pub const FULL_TABLE_LIMIT: usize = 4096;

/// Unit-length shortest-path distances: the full table when no centers are
/// given (small graphs only), otherwise one row per center.
pub fn shortest_path_metric(g: &Looptree, centers: Option<&[usize]>) -> Result<PathMetric> {
    let adj = g.adjacency();
    let n = g.num_vertices();
    if n == 0 {
        return Err(structure("empty looptree"));
    }
    let first = adj.bfs(0);
    if first.contains(&u32::MAX) {
        return Err(structure("looptree is not connected"));
    }
    match centers {
        Some(cs) => {
            if let Some(&bad) = cs.iter().find(|&&c| c >= n) {
                return Err(Error::UnknownVertex(bad));
            }
            let rows = cs.iter().map(|&c| if c == 0 { first.clone() } else { adj.bfs(c) }).collect();
            Ok(PathMetric::Rows(MetricRows { centers: cs.to_vec(), rows }))
        }
        None => {
            if n > FULL_TABLE_LIMIT {
                return Err(guard(format!(
                    "full distance table limited to {FULL_TABLE_LIMIT} vertices; pass centers"
                )));
            }
            let mut dist = vec![0.0; n * n];
            for s in 0..n {
                let row = if s == 0 { first.clone() } else { adj.bfs(s) };
                for (t, d) in row.into_iter().enumerate() {
                    dist[s * n + t] = f64::from(d);
                }
            }
            let mut space = FiniteMetricSpace::from_table(n, dist)?;
            for (name, &v) in g.marks() {
                space = space.with_mark(name, v)?;
            }
            Ok(PathMetric::Full(space))
        }
    }
}
