use rand::Rng;

use super::lpam::grow_lpam_tree;
use super::polya::{polya_sample, UrnState};
use crate::error::{param, Result};
use crate::tree_core::{CornerKey, PlaneTree};

/// A tree assembled from a seed by gluing one planted tree into each corner.
#[derive(Clone, Debug)]
pub struct SeedDecomposition {
    pub urn: UrnState,
    /// Seed corners in enumeration order (vertex id, then slot).
    pub corners: Vec<CornerKey>,
    /// Planted trees, one per corner.
    pub parts: Vec<PlaneTree>,
    pub tree: PlaneTree,
}

/// Glues `parts[i]` into the `i`-th corner of `seed`.
pub fn assemble(seed: &PlaneTree, parts: &[PlaneTree]) -> Result<(Vec<CornerKey>, PlaneTree)> {
    let corners: Vec<CornerKey> = seed
        .corners()
        .map(|c| seed.corner_key(c))
        .collect::<Result<_>>()?;
    if corners.len() != parts.len() {
        return Err(param(format!("{} parts for {} corners", parts.len(), corners.len())));
    }
    let mut tree = seed.clone();
    for (key, part) in corners.iter().zip(parts) {
        tree.glue_planted(*key, part)?;
    }
    Ok((corners, tree))
}

/// Draws the urn and the planted parts, then assembles.
pub fn decompose_growth<R: Rng + ?Sized>(seed: &PlaneTree, n: usize, rng: &mut R) -> Result<SeedDecomposition> {
    if seed.is_planted() || seed.num_vertices() < 2 {
        return Err(param("seed decomposition needs a non-planted seed with at least 2 vertices"));
    }
    if n < seed.num_vertices() {
        return Err(param(format!("target size {n} is below the seed size {}", seed.num_vertices())));
    }
    let colors = seed.corner_count();
    let urn = polya_sample(n - seed.num_vertices(), colors, rng)?;
    let planted = PlaneTree::planted_vertex();
    let parts = urn
        .counts
        .iter()
        .map(|&c| grow_lpam_tree(&planted, (c as usize).div_ceil(2), 0.0, rng))
        .collect::<Result<Vec<_>>>()?;
    let (corners, tree) = assemble(seed, &parts)?;
    Ok(SeedDecomposition { urn, corners, parts, tree })
}

pub fn grow_via_seed_decomposition<R: Rng + ?Sized>(seed: &PlaneTree, n: usize, rng: &mut R) -> Result<PlaneTree> {
    Ok(decompose_growth(seed, n, rng)?.tree)
}
