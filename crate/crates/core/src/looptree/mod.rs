//! Looptrees: the Loop transform of plane trees, the Glu quotient of
//! leaf-labeled trees, modified looptrees and their gluing on a seed.
//!
//! Looptree vertices are tree edges.  Around each tree vertex the incident
//! edges, in cyclic order, form a cycle with one looptree edge per corner.

mod build;
mod cactus;
mod canon;
mod glu;
mod metric;

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{structure, Error, Result};

pub use build::{glue_on_seed, loop_planted, loop_tree, modified_loop};
pub use cactus::{MetricCactus, WeightedCycle};
pub use canon::{brute_force_isomorphic, LooptreeCode};
pub use glu::{glu_discrete, glu_discrete_with_classes, LabeledDiscreteTree};
pub use metric::{shortest_path_metric, Adjacency, MetricRows, PathMetric, FULL_TABLE_LIMIT};

/// Finite multigraph with unit-length edges and optional named vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Looptree {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    marks: BTreeMap<String, usize>,
}

impl Looptree {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= num_vertices || b >= num_vertices) {
            return Err(Error::UnknownVertex(a.max(b)));
        }
        Ok(Looptree { num_vertices, edges, marks: BTreeMap::new() })
    }

    pub fn with_mark(mut self, name: &str, v: usize) -> Result<Self> {
        if v >= self.num_vertices {
            return Err(Error::UnknownVertex(v));
        }
        self.marks.insert(name.to_string(), v);
        Ok(self)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn marks(&self) -> &BTreeMap<String, usize> {
        &self.marks
    }

    pub fn mark(&self, name: &str) -> Option<usize> {
        self.marks.get(name).copied()
    }

    pub fn self_loops(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a == b).count()
    }

    /// Edges as sorted pairs, sorted.
    pub fn edge_multiset(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        out.sort_unstable();
        out
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::from_edges(self.num_vertices, &self.edges)
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices == 0 || self.adjacency().bfs(0).iter().all(|&d| d != u32::MAX)
    }

    /// Isomorphism-invariant code; marks are part of the structure when
    /// `with_marks` is set.
    pub fn canonical_form(&self, with_marks: bool) -> Result<LooptreeCode> {
        canon::canonical_form(self, with_marks)
    }

    pub fn is_isomorphic(&self, other: &Looptree, with_marks: bool) -> Result<bool> {
        Ok(self.num_vertices == other.num_vertices
            && self.edges.len() == other.edges.len()
            && self.canonical_form(with_marks)? == other.canonical_form(with_marks)?)
    }

    pub fn to_cactus(&self) -> Result<MetricCactus> {
        MetricCactus::from_looptree(self)
    }

    /// `{"vertices": [...], "edges": [[u, v], ...], "marks": {...}}`.
    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self.edges.iter().map(|&(a, b)| json!([a, b])).collect();
        json!({
            "vertices": (0..self.num_vertices).collect::<Vec<_>>(),
            "edges": edges,
            "marks": self.marks,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |m: &str| structure(format!("looptree JSON: {m}"));
        let vertices = value["vertices"].as_array().ok_or_else(|| bad("missing 'vertices'"))?;
        let ids: Vec<u64> = vertices.iter().map(|v| v.as_u64().ok_or_else(|| bad("vertex ids"))).collect::<Result<_>>()?;
        if ids.iter().enumerate().any(|(i, &v)| v != i as u64) {
            return Err(bad("vertices must be 0..n in order"));
        }
        let mut edges = Vec::new();
        for e in value["edges"].as_array().ok_or_else(|| bad("missing 'edges'"))? {
            let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("edges are pairs"))?;
            let get = |i: usize| pair[i].as_u64().map(|x| x as usize).ok_or_else(|| bad("edge endpoints"));
            edges.push((get(0)?, get(1)?));
        }
        let mut lt = Looptree::new(ids.len(), edges)?;
        if let Some(marks) = value.get("marks").and_then(Value::as_object) {
            for (k, v) in marks {
                lt = lt.with_mark(k, v.as_u64().ok_or_else(|| bad("mark ids"))? as usize)?;
            }
        }
        Ok(lt)
    }
}
