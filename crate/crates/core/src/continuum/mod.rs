//! Continuum-side samplers: the line-breaking construction, the split and
//! branch-length laws of nested subtrees, and a ball-volume dimension
//! estimator.

mod dimension;

pub use dimension::{ball_profile, circle_graph, dimension_estimate, torus_grid, BallProfile, DimensionEstimate};

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{guard, param, Result};
use crate::gh_metric::FiniteMetricSpace;
use crate::looptree::{MetricCactus, WeightedCycle, FULL_TABLE_LIMIT};

/// Circles of the line-breaking construction.  Circle `j` has
/// circumference `circle_lengths[j]`; for `j >= 1` it is glued at offset `o`
/// along circle `c`, recorded as `attach_points[j] = Some((c, o))`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleChain {
    pub circle_lengths: Vec<f64>,
    pub attach_points: Vec<Option<(usize, f64)>>,
}

/// Break points `theta_1 < ... < theta_k` of a Poisson process with
/// intensity `t/2`.
pub fn sample_break_points<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let mut gamma = 0.0;
    (0..k)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            gamma += e;
            2.0 * gamma.sqrt()
        })
        .collect()
}

pub fn sample_circle_chain<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Result<CircleChain> {
    if k == 0 {
        return Err(param("need at least one circle"));
    }
    let theta = sample_break_points(k, rng);
    let mut lengths = Vec::with_capacity(k);
    let mut attach = Vec::with_capacity(k);
    let mut prev = 0.0;
    for (j, &t) in theta.iter().enumerate() {
        if j > 0 {
            // Uniform point on the circles built so far (total length prev).
            let u = rng.random::<f64>() * prev;
            // Circle c spans [theta[c-1], theta[c]) along the line.
            let host = theta[..j].partition_point(|&x| x <= u).min(j - 1);
            let start = if host == 0 { 0.0 } else { theta[host - 1] };
            let offset = (u - start).clamp(0.0, lengths[host]);
            attach.push(Some((host, offset)));
        } else {
            attach.push(None);
        }
        lengths.push(t - prev);
        prev = t;
    }
    Ok(CircleChain { circle_lengths: lengths, attach_points: attach })
}

impl CircleChain {
    pub fn total_length(&self) -> f64 {
        self.circle_lengths.iter().sum()
    }

    /// Discretizes every circle with spacing at most `1 / resolution`; the
    /// vertex metric is within half a spacing of the continuum one.
    pub fn to_cactus(&self, resolution: f64) -> Result<MetricCactus> {
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(param("resolution must be positive"));
        }
        let k = self.circle_lengths.len();
        let mut children: Vec<Vec<(f64, usize)>> = vec![Vec::new(); k];
        for (j, a) in self.attach_points.iter().enumerate() {
            if let Some((c, o)) = *a {
                children[c].push((o, j));
            }
        }
        let mut base = vec![usize::MAX; k];
        let mut next_id = 0usize;
        let mut cycles = Vec::with_capacity(k);
        for c in 0..k {
            let len = self.circle_lengths[c];
            let m = ((len * resolution).ceil() as usize).max(1);
            let mut marks: Vec<(f64, Option<usize>)> = (0..m).map(|i| (i as f64 * len / m as f64, None)).collect();
            marks.extend(children[c].iter().map(|&(o, j)| (if o < len { o } else { 0.0 }, Some(j))));
            marks.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut vertices: Vec<usize> = Vec::with_capacity(marks.len());
            let mut offsets: Vec<f64> = Vec::with_capacity(marks.len());
            for &(o, child) in &marks {
                let id = if offsets.last() == Some(&o) {
                    vertices[vertices.len() - 1]
                } else {
                    let id = if vertices.is_empty() && c > 0 { base[c] } else { next_id };
                    if id == next_id {
                        next_id += 1;
                    }
                    vertices.push(id);
                    offsets.push(o);
                    id
                };
                if let Some(j) = child {
                    base[j] = id;
                }
            }
            let arcs: Vec<f64> = (0..offsets.len())
                .map(|i| if i + 1 < offsets.len() { offsets[i + 1] - offsets[i] } else { len - offsets[i] })
                .collect();
            cycles.push(WeightedCycle { vertices, arcs });
        }
        MetricCactus::new(next_id, cycles)
    }
}

/// Samples `k` circles and returns the discretized metric cactus.
pub fn line_breaking_cactus<R: Rng + ?Sized>(k: usize, rng: &mut R, resolution: f64) -> Result<(CircleChain, MetricCactus)> {
    let chain = sample_circle_chain(k, rng)?;
    let cactus = chain.to_cactus(resolution)?;
    Ok((chain, cactus))
}

/// The discretized line-breaking space as a full distance table (small
/// instances only).
pub fn line_breaking_space<R: Rng + ?Sized>(k: usize, rng: &mut R, resolution: f64) -> Result<FiniteMetricSpace> {
    let (_, cactus) = line_breaking_cactus(k, rng, resolution)?;
    let n = cactus.num_vertices();
    if n > FULL_TABLE_LIMIT {
        return Err(guard(format!("full distance table limited to {FULL_TABLE_LIMIT} points")));
    }
    let mut table = Vec::with_capacity(n * n);
    for s in 0..n {
        table.extend(cactus.distances_from(s));
    }
    // Dijkstra sums may differ in the last bit between directions.
    for i in 0..n {
        for j in i + 1..n {
            let d = table[i * n + j].min(table[j * n + i]);
            table[i * n + j] = d;
            table[j * n + i] = d;
        }
    }
    FiniteMetricSpace::from_table(n, table)
}

/// Split proportion with CDF `sqrt(x)` on `[0, 1]`.
pub fn sample_split_alpha<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    u * u
}

/// Density `8 s^3 exp(-2 s^2)` of the total branch length.
pub fn total_length_density(s: f64) -> f64 {
    if s < 0.0 {
        0.0
    } else {
        8.0 * s.powi(3) * (-2.0 * s * s).exp()
    }
}

/// Branch lengths with joint density `16 (l1+l2+l3) exp(-2 (l1+l2+l3)^2)`:
/// a total `S` (with `2 S^2` Gamma(2)) split uniformly on the simplex.
pub fn sample_triple_lengths<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64, f64) {
    let g: f64 = Exp1.sample(rng);
    let h: f64 = Exp1.sample(rng);
    let s = ((g + h) / 2.0).sqrt();
    let e: [f64; 3] = [Exp1.sample(rng), Exp1.sample(rng), Exp1.sample(rng)];
    let tot: f64 = e.iter().sum();
    (s * e[0] / tot, s * e[1] / tot, s * e[2] / tot)
}

/// Partial sums of `-log alpha` over independent split proportions.
pub fn mass_walk<R: Rng + ?Sized>(steps: usize, rng: &mut R) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(param("mass walk needs at least one step"));
    }
    let mut acc = 0.0;
    Ok((0..steps)
        .map(|_| {
            acc -= sample_split_alpha(rng).ln();
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;

    #[test]
    fn single_circle() {
        let mut rng = from_seed(3);
        let (chain, cactus) = line_breaking_cactus(1, &mut rng, 40.0).unwrap();
        let theta = chain.circle_lengths[0];
        assert!((cactus.diameter().unwrap() - theta / 2.0).abs() <= 1.0 / 40.0);
        assert!((cactus.total_length() - theta).abs() < 1e-9);
    }

    #[test]
    fn chain_lengths_add_up() {
        let mut rng = from_seed(4);
        let (chain, cactus) = line_breaking_cactus(50, &mut rng, 10.0).unwrap();
        assert!((cactus.total_length() - chain.total_length()).abs() < 1e-9);
        let d = cactus.diameter().unwrap();
        assert!((d - cactus.diameter_brute_force()).abs() < 1e-9);
        let space = line_breaking_space(5, &mut from_seed(5), 4.0).unwrap();
        assert!(space.satisfies_triangle_inequality());
    }

    #[test]
    fn triple_sums_match_density_support() {
        let mut rng = from_seed(6);
        for _ in 0..100 {
            let (a, b, c) = sample_triple_lengths(&mut rng);
            assert!(a >= 0.0 && b >= 0.0 && c >= 0.0);
        }
        assert!(mass_walk(0, &mut rng).is_err());
    }
}
