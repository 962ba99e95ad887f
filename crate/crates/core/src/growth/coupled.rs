use rand::Rng;

use super::binary::{BinaryTrajectory, LabeledBinaryTree};
use super::lpam::GrowthTrajectory;
use crate::error::{param, Result};
use crate::tree_core::{CornerKey, PlaneTree};

/// Rémy's binary tree and the planted plane tree driven by the same choice.
///
/// Binary edge `e` is paired with a corner of the plane tree; splitting `e`
/// grafts into that corner.  `class` sends each binary vertex to the plane
/// tree edge (= looptree vertex) it is glued onto.
#[derive(Clone, Debug)]
pub struct CoupledGrower {
    binary: LabeledBinaryTree,
    plane: PlaneTree,
    keys: Vec<CornerKey>,
    class: Vec<usize>,
}

impl Default for CoupledGrower {
    fn default() -> Self {
        Self::new()
    }
}

impl CoupledGrower {
    pub fn new() -> Self {
        CoupledGrower {
            binary: LabeledBinaryTree::new(),
            plane: PlaneTree::planted_vertex(),
            keys: vec![CornerKey { vertex: 0, after: 0 }],
            class: vec![0, 0],
        }
    }

    pub fn binary(&self) -> &LabeledBinaryTree {
        &self.binary
    }

    pub fn plane(&self) -> &PlaneTree {
        &self.plane
    }

    pub fn vertex_to_edge(&self) -> &[usize] {
        &self.class
    }

    pub fn corner_of_edge(&self, e: usize) -> CornerKey {
        self.keys[e]
    }

    /// Splits binary edge `e` and grafts into its corner.
    pub fn apply(&mut self, e: usize) -> Result<crate::tree_core::Corner> {
        let key = *self.keys.get(e).ok_or_else(|| param(format!("no edge {e}")))?;
        let corner = self.plane.corner_of_key(key)?;
        let w = self.plane.graft(corner)?;
        self.binary.split(e)?;
        self.keys.push(CornerKey { vertex: key.vertex, after: w });
        self.keys.push(CornerKey { vertex: w, after: w });
        self.class.push(w);
        self.class.push(w);
        Ok(corner)
    }
}

#[derive(Clone, Debug)]
pub struct CoupledRun {
    pub binary: BinaryTrajectory,
    pub plane: GrowthTrajectory,
    /// Binary vertex to plane-tree edge, for the final pair.
    pub vertex_to_edge: Vec<usize>,
}

/// `B_1..B_n` and `T_1..T_n` (planted) from one sequence of uniform edges.
pub fn grow_coupled<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CoupledRun> {
    if n == 0 {
        return Err(param("coupled growth needs n >= 1"));
    }
    let mut g = CoupledGrower::new();
    let mut splits = Vec::with_capacity(n - 1);
    let mut corners = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let e = rng.random_range(0..g.binary.num_edges());
        corners.push(g.apply(e)?);
        splits.push(e);
    }
    Ok(CoupledRun {
        binary: BinaryTrajectory { splits, final_state: g.binary },
        plane: GrowthTrajectory {
            rng_seed: None,
            delta: 0.0,
            initial: PlaneTree::planted_vertex(),
            choices: corners,
            final_state: g.plane,
        },
        vertex_to_edge: g.class,
    })
}
