//! Finite metric spaces, Hausdorff distances, and Gromov–Hausdorff bounds
//! through correspondences.

mod space;

pub use space::FiniteMetricSpace;

use crate::error::{guard, param, structure, Result};
use crate::looptree::Adjacency;

/// A relation between the points of two spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    pub pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Correspondence { pairs }
    }

    pub fn identity(n: usize) -> Self {
        Correspondence { pairs: (0..n).map(|i| (i, i)).collect() }
    }

    /// Every point of both sides appears in some pair.
    pub fn is_total(&self, nx: usize, ny: usize) -> bool {
        let mut sx = vec![false; nx];
        let mut sy = vec![false; ny];
        for &(x, y) in &self.pairs {
            if x >= nx || y >= ny {
                return false;
            }
            sx[x] = true;
            sy[y] = true;
        }
        sx.into_iter().chain(sy).all(|b| b)
    }
}

fn check_subset(space: &FiniteMetricSpace, set: &[usize], name: &str) -> Result<()> {
    if set.is_empty() {
        return Err(param(format!("{name} is empty")));
    }
    if let Some(&p) = set.iter().find(|&&p| p >= space.len()) {
        return Err(crate::Error::UnknownVertex(p));
    }
    Ok(())
}

/// Hausdorff distance between two subsets of one space.
pub fn hausdorff_in_common(space: &FiniteMetricSpace, a: &[usize], b: &[usize]) -> Result<f64> {
    check_subset(space, a, "first set")?;
    check_subset(space, b, "second set")?;
    let directed = |from: &[usize], to: &[usize]| {
        from.iter()
            .map(|&x| to.iter().map(|&y| space.dist(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

/// Half the distortion of `r`, an upper bound on the (pointed) GH distance.
pub fn gh_upper_from_correspondence(x: &FiniteMetricSpace, y: &FiniteMetricSpace, r: &Correspondence) -> Result<f64> {
    if !r.is_total(x.len(), y.len()) {
        return Err(structure("correspondence is not total on both spaces"));
    }
    if x.marks().len() != y.marks().len() {
        return Err(structure("spaces carry different numbers of marks"));
    }
    for (mx, my) in x.marks().iter().zip(y.marks()) {
        if !r.pairs.contains(&(mx.1, my.1)) {
            return Err(structure(format!("marks '{}' and '{}' are not paired", mx.0, my.0)));
        }
    }
    let mut worst = 0.0f64;
    for &(a, b) in &r.pairs {
        for &(c, d) in &r.pairs {
            worst = worst.max((x.dist(a, c) - y.dist(b, d)).abs());
        }
    }
    Ok(worst / 2.0)
}

/// Largest space size accepted by [`gh_exact_small`].
pub const GH_EXACT_LIMIT: usize = 7;

/// Exact (pointed) GH distance: the least half-distortion over all
/// correspondences pairing the marks in order.
pub fn gh_exact_small(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<f64> {
    if x.len() > GH_EXACT_LIMIT || y.len() > GH_EXACT_LIMIT {
        return Err(guard(format!("exact GH is limited to {GH_EXACT_LIMIT} points per space")));
    }
    if x.marks().len() != y.marks().len() {
        return Err(structure("spaces carry different numbers of marks"));
    }
    let mut candidates = vec![0.0f64];
    for a in 0..x.len() {
        for c in 0..x.len() {
            for b in 0..y.len() {
                for d in 0..y.len() {
                    candidates.push((x.dist(a, c) - y.dist(b, d)).abs());
                }
            }
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // Feasibility is monotone in the threshold.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(x, y, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo] / 2.0)
}

/// Is there a correspondence with distortion at most `eps`?  Every
/// correspondence contains the union of a map X → Y and a map Y → X, so
/// those are searched, skipping points of Y already covered.
fn feasible(x: &FiniteMetricSpace, y: &FiniteMetricSpace, eps: f64) -> bool {
    let tol = eps + 1e-12;
    let mut pairs: Vec<(usize, usize)> = x.marks().iter().zip(y.marks()).map(|(a, b)| (a.1, b.1)).collect();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[..i] {
            if (x.dist(a, c) - y.dist(b, d)).abs() > tol {
                return false;
            }
        }
    }
    fn ok(x: &FiniteMetricSpace, y: &FiniteMetricSpace, pairs: &[(usize, usize)], a: usize, b: usize, tol: f64) -> bool {
        pairs.iter().all(|&(c, d)| (x.dist(a, c) - y.dist(b, d)).abs() <= tol)
    }
    fn search(x: &FiniteMetricSpace, y: &FiniteMetricSpace, pairs: &mut Vec<(usize, usize)>, step: usize, tol: f64) -> bool {
        let nx = x.len();
        if step < nx {
            let a = step;
            for b in 0..y.len() {
                if ok(x, y, pairs, a, b, tol) {
                    pairs.push((a, b));
                    if search(x, y, pairs, step + 1, tol) {
                        return true;
                    }
                    pairs.pop();
                }
            }
            return false;
        }
        let Some(b) = (0..y.len()).find(|&b| !pairs.iter().any(|&(_, d)| d == b)) else {
            return true;
        };
        for a in 0..nx {
            if ok(x, y, pairs, a, b, tol) {
                pairs.push((a, b));
                if search(x, y, pairs, step, tol) {
                    return true;
                }
                pairs.pop();
            }
        }
        false
    }
    search(x, y, &mut pairs, 0, tol)
}

/// Smallest radius at which balls around `points` cover the space.
pub fn net_radius(space: &FiniteMetricSpace, points: &[usize]) -> Result<f64> {
    check_subset(space, points, "net")?;
    Ok((0..space.len())
        .map(|y| points.iter().map(|&p| space.dist(y, p)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max))
}

/// [`net_radius`] on a unit-length graph, by one multi-source search.
pub fn graph_net_radius(adj: &Adjacency, points: &[usize]) -> Result<u32> {
    if points.is_empty() {
        return Err(param("net is empty"));
    }
    let d = adj.multi_source_bfs(points);
    if d.contains(&u32::MAX) {
        return Err(structure("graph is not connected"));
    }
    Ok(d.into_iter().max().unwrap_or(0))
}

/// [`hausdorff_in_common`] on a unit-length graph.
pub fn graph_hausdorff(adj: &Adjacency, a: &[usize], b: &[usize]) -> Result<u32> {
    if a.is_empty() || b.is_empty() {
        return Err(param("Hausdorff distance of an empty set"));
    }
    let to_a = adj.multi_source_bfs(a);
    let to_b = adj.multi_source_bfs(b);
    let far_b = b.iter().map(|&v| to_a[v]).max().unwrap_or(0);
    let far_a = a.iter().map(|&v| to_b[v]).max().unwrap_or(0);
    let worst = far_a.max(far_b);
    if worst == u32::MAX {
        return Err(structure("graph is not connected"));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> FiniteMetricSpace {
        FiniteMetricSpace::from_fn(3, |i, j| (i as f64 - j as f64).abs()).unwrap()
    }

    #[test]
    fn hausdorff_examples() {
        let s = path3();
        assert_eq!(hausdorff_in_common(&s, &[0, 1], &[0, 1]).unwrap(), 0.0);
        assert_eq!(hausdorff_in_common(&s, &[0], &[2]).unwrap(), 2.0);
        assert_eq!(hausdorff_in_common(&s, &[0], &[1, 2]).unwrap(), hausdorff_in_common(&s, &[1, 2], &[0]).unwrap());
        assert!(hausdorff_in_common(&s, &[], &[1]).is_err());
    }

    #[test]
    fn correspondence_examples() {
        let s = path3();
        assert_eq!(gh_upper_from_correspondence(&s, &s, &Correspondence::identity(3)).unwrap(), 0.0);
        let point = FiniteMetricSpace::from_fn(1, |_, _| 0.0).unwrap();
        let two = FiniteMetricSpace::from_fn(2, |i, j| if i == j { 0.0 } else { 3.0 }).unwrap();
        let r = Correspondence::new(vec![(0, 0), (0, 1)]);
        assert_eq!(gh_upper_from_correspondence(&point, &two, &r).unwrap(), 1.5);
        assert!(gh_upper_from_correspondence(&point, &two, &Correspondence::new(vec![(0, 0)])).is_err());
        let stretched = s.scaled(1.1);
        let d = gh_upper_from_correspondence(&s, &stretched, &Correspondence::identity(3)).unwrap();
        assert!((d - 0.1 * 2.0 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_examples() {
        let s = path3();
        assert_eq!(gh_exact_small(&s, &s).unwrap(), 0.0);
        let point = FiniteMetricSpace::from_fn(1, |_, _| 0.0).unwrap();
        let two = FiniteMetricSpace::from_fn(2, |i, j| if i == j { 0.0 } else { 3.0 }).unwrap();
        assert_eq!(gh_exact_small(&point, &two).unwrap(), 1.5);
        let big = FiniteMetricSpace::from_fn(8, |i, j| if i == j { 0.0 } else { 1.0 }).unwrap();
        assert!(gh_exact_small(&big, &point).is_err());
    }

    #[test]
    fn net_examples() {
        let s = path3();
        assert_eq!(net_radius(&s, &[0, 1, 2]).unwrap(), 0.0);
        assert_eq!(net_radius(&s, &[0, 2]).unwrap(), 1.0);
        assert!(net_radius(&s, &[]).is_err());
    }
}
