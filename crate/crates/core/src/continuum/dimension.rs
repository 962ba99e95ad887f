use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{param, structure, Result};
use crate::looptree::Adjacency;
use crate::stats::{log_log_slope, LinearFit};

/// Empirical ball masses: `volumes[i][j]` is the fraction of vertices within
/// hop distance `radii[j]` of `centers[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallProfile {
    pub radii: Vec<f64>,
    pub centers: Vec<usize>,
    pub volumes: Vec<Vec<f64>>,
}

impl BallProfile {
    pub fn mean_volumes(&self) -> Vec<f64> {
        let k = self.centers.len() as f64;
        (0..self.radii.len()).map(|j| self.volumes.iter().map(|row| row[j]).sum::<f64>() / k).collect()
    }

    /// `center,r,volume` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("center,r,volume\n");
        for (c, row) in self.centers.iter().zip(&self.volumes) {
            for (r, v) in self.radii.iter().zip(row) {
                out.push_str(&format!("{c},{r},{v}\n"));
            }
        }
        out
    }
}

pub fn ball_profile(adj: &Adjacency, centers: &[usize], radii: &[f64]) -> Result<BallProfile> {
    let n = adj.num_vertices();
    if let Some(&c) = centers.iter().find(|&&c| c >= n) {
        return Err(crate::Error::UnknownVertex(c));
    }
    let volumes: Result<Vec<Vec<f64>>> = centers
        .par_iter()
        .map(|&c| {
            let dist = adj.bfs(c);
            let mut hist: Vec<usize> = Vec::new();
            for &d in &dist {
                if d == u32::MAX {
                    return Err(structure("graph is not connected"));
                }
                let d = d as usize;
                if d >= hist.len() {
                    hist.resize(d + 1, 0);
                }
                hist[d] += 1;
            }
            let mut cum = 0usize;
            let cum: Vec<usize> = hist.iter().map(|h| {
                cum += h;
                cum
            }).collect();
            Ok(radii
                .iter()
                .map(|&r| {
                    let k = (r.floor() as usize).min(cum.len() - 1);
                    cum[k] as f64 / n as f64
                })
                .collect())
        })
        .collect();
    Ok(BallProfile { radii: radii.to_vec(), centers: centers.to_vec(), volumes: volumes? })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    pub fit: LinearFit,
    pub profile: BallProfile,
}

impl DimensionEstimate {
    pub fn slope(&self) -> f64 {
        self.fit.slope
    }
}

/// Least-squares slope of the log mean ball mass against `log r`, over
/// `centers` uniformly chosen distinct centers.
pub fn dimension_estimate<R: Rng + ?Sized>(
    adj: &Adjacency,
    centers: usize,
    radii: &[f64],
    rng: &mut R,
) -> Result<DimensionEstimate> {
    let n = adj.num_vertices();
    if centers == 0 || centers > n {
        return Err(param(format!("need between 1 and {n} centers")));
    }
    let mut sorted = radii.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if sorted.len() < 2 || sorted[0] <= 0.0 {
        return Err(param("need at least two distinct positive radii"));
    }
    let chosen: Vec<usize> = sample(rng, n, centers).into_vec();
    let profile = ball_profile(adj, &chosen, &sorted)?;
    let fit = log_log_slope(&profile.radii, &profile.mean_volumes())?;
    Ok(DimensionEstimate { fit, profile })
}

/// Cycle graph on `n` vertices.
pub fn circle_graph(n: usize) -> Adjacency {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Adjacency::from_edges(n, &edges)
}

/// `m × m` square grid with periodic boundary.
pub fn torus_grid(m: usize) -> Adjacency {
    let id = |x: usize, y: usize| (x % m) * m + (y % m);
    let mut edges = Vec::with_capacity(2 * m * m);
    for x in 0..m {
        for y in 0..m {
            edges.push((id(x, y), id(x + 1, y)));
            edges.push((id(x, y), id(x, y + 1)));
        }
    }
    Adjacency::from_edges(m * m, &edges)
}
