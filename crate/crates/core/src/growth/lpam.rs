use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{param, Error, Result};
use crate::rng;
use crate::tree_core::{Corner, PlaneTree, Tree};

/// Incremental sampler for the plane affine attachment chain.
///
/// A vertex is chosen with probability proportional to `degree + delta`,
/// then one of its corners uniformly.  The corner table holds each vertex
/// once per unit of degree, so degree-proportional draws are O(1).
#[derive(Clone, Debug)]
pub struct LpamGrower {
    tree: PlaneTree,
    slots: Vec<usize>,
    delta: f64,
}

impl LpamGrower {
    pub fn new(seed: PlaneTree, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        if seed.corner_count() == 0 {
            return Err(param("seed must have an edge or be planted"));
        }
        let mut slots = Vec::with_capacity(2 * seed.corner_count());
        for v in 0..seed.num_vertices() {
            slots.extend(std::iter::repeat_n(v, seed.degree(v)));
        }
        Ok(LpamGrower { tree: seed, slots, delta })
    }

    pub fn tree(&self) -> &PlaneTree {
        &self.tree
    }

    pub fn into_tree(self) -> PlaneTree {
        self.tree
    }

    pub fn num_vertices(&self) -> usize {
        self.tree.num_vertices()
    }

    pub fn reserve(&mut self, additional: usize) {
        self.slots.reserve(2 * additional);
    }

    fn sample_vertex<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let by_degree = |rng: &mut R| self.slots[rng.random_range(0..self.slots.len())];
        if self.delta == 0.0 {
            by_degree(rng)
        } else if self.delta > 0.0 {
            let corners = self.slots.len() as f64;
            let total = corners + self.delta * self.num_vertices() as f64;
            if rng.random::<f64>() * total < corners {
                by_degree(rng)
            } else {
                rng.random_range(0..self.num_vertices())
            }
        } else {
            loop {
                let v = by_degree(rng);
                let d = self.tree.degree(v) as f64;
                if rng.random::<f64>() * d < d + self.delta {
                    return v;
                }
            }
        }
    }

    pub fn sample_corner<R: Rng + ?Sized>(&self, rng: &mut R) -> Corner {
        let vertex = self.sample_vertex(rng);
        let slot = rng.random_range(0..self.tree.degree(vertex));
        Corner { vertex, slot }
    }

    /// Grafts into `c` and returns the new vertex.
    pub fn apply(&mut self, c: Corner) -> Result<usize> {
        let w = self.tree.graft(c)?;
        self.slots.push(c.vertex);
        self.slots.push(w);
        Ok(w)
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Corner {
        let c = self.sample_corner(rng);
        self.apply(c).expect("sampled corners are valid");
        c
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta <= -1.0 {
        return Err(param(format!("delta must be a finite real > -1, got {delta}")));
    }
    Ok(())
}

/// Exact one-step law over corners: vertex weight `deg + delta`, then a
/// uniform corner of that vertex.
pub fn corner_law(t: &PlaneTree, delta: &BigRational) -> Result<Vec<(Corner, BigRational)>> {
    if *delta <= -BigRational::one() {
        return Err(param("delta must be > -1"));
    }
    let n = BigRational::from_integer(BigInt::from(t.num_vertices()));
    let total = BigRational::from_integer(BigInt::from(t.corner_count())) + delta * n;
    let mut out = Vec::with_capacity(t.corner_count());
    for c in t.corners() {
        let d = BigRational::from_integer(BigInt::from(t.degree(c.vertex)));
        let p = (&d + delta) / &total / d;
        out.push((c, p));
    }
    debug_assert_eq!(out.iter().fold(BigRational::zero(), |a, (_, p)| a + p), BigRational::one());
    Ok(out)
}

/// A growth run: the seed, every grafted corner, and the final tree.
///
/// Intermediate trees are recovered by replaying the choices; storing them
/// all would cost quadratic memory.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthTrajectory {
    pub rng_seed: Option<u64>,
    pub delta: f64,
    pub initial: PlaneTree,
    pub choices: Vec<Corner>,
    pub final_state: PlaneTree,
}

impl GrowthTrajectory {
    /// Tree after `k` grafts.
    pub fn state_after(&self, k: usize) -> Result<PlaneTree> {
        if k > self.choices.len() {
            return Err(Error::SizeMismatch(format!("trajectory has {} steps", self.choices.len())));
        }
        let mut t = self.initial.clone();
        for &c in &self.choices[..k] {
            t.graft(c)?;
        }
        Ok(t)
    }

    /// Every state from the seed to the final tree.
    pub fn states(&self) -> impl Iterator<Item = PlaneTree> + '_ {
        let mut t = self.initial.clone();
        std::iter::once(t.clone()).chain(self.choices.iter().map(move |&c| {
            t.graft(c).expect("recorded corners are valid");
            t.clone()
        }))
    }

    /// Regrows from the recorded seed and checks every choice matches.
    pub fn replays(&self) -> Result<bool> {
        let seed = self.rng_seed.ok_or_else(|| param("trajectory has no recorded seed"))?;
        let again = grow_lpam(&self.initial, self.final_state.num_vertices(), self.delta, seed)?;
        Ok(again == *self)
    }

    /// JSON Lines: a header, one line per choice, then the final tree.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let header = json!({
            "rng_seed": self.rng_seed,
            "delta": self.delta,
            "initial": self.initial.to_json(),
        });
        out.push_str(&header.to_string());
        out.push('\n');
        for (k, c) in self.choices.iter().enumerate() {
            let line = json!({ "step": k + 1, "vertex": c.vertex, "slot": c.slot });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out.push_str(&json!({ "final": self.final_state.to_json() }).to_string());
        out.push('\n');
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Structure(format!("trajectory JSONL: {m}"));
        // `#` lines are headers written by other tools.
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let parse = |l: &str| serde_json::from_str::<Value>(l).map_err(|e| bad(&e.to_string()));
        let header = parse(lines.next().ok_or_else(|| bad("empty"))?)?;
        let initial = PlaneTree::from_json(&header["initial"])?;
        let mut choices = Vec::new();
        let mut final_state = None;
        for line in lines {
            let v = parse(line)?;
            if let Some(f) = v.get("final") {
                final_state = Some(PlaneTree::from_json(f)?);
                continue;
            }
            let get = |k: &str| v[k].as_u64().map(|x| x as usize).ok_or_else(|| bad("choice fields"));
            choices.push(Corner { vertex: get("vertex")?, slot: get("slot")? });
        }
        let recorded = final_state.ok_or_else(|| bad("missing final state"))?;
        let mut traj = GrowthTrajectory {
            rng_seed: header["rng_seed"].as_u64(),
            delta: header["delta"].as_f64().ok_or_else(|| bad("delta"))?,
            final_state: initial.clone(),
            initial,
            choices,
        };
        traj.final_state = traj.state_after(traj.choices.len())?;
        if traj.final_state.serialize() != recorded.serialize() {
            return Err(bad("final state does not match the recorded choices"));
        }
        Ok(traj)
    }
}

/// Grows `seed` to `n` vertices with the stream derived from `rng_seed`.
pub fn grow_lpam(seed: &PlaneTree, n: usize, delta: f64, rng_seed: u64) -> Result<GrowthTrajectory> {
    let mut rng = rng::from_seed(rng_seed);
    let mut traj = grow_lpam_with(seed, n, delta, &mut rng)?;
    traj.rng_seed = Some(rng_seed);
    Ok(traj)
}

pub fn grow_lpam_with<R: Rng + ?Sized>(
    seed: &PlaneTree,
    n: usize,
    delta: f64,
    rng: &mut R,
) -> Result<GrowthTrajectory> {
    if n < seed.num_vertices() {
        return Err(param(format!("target size {n} is below the seed size {}", seed.num_vertices())));
    }
    let mut g = LpamGrower::new(seed.clone(), delta)?;
    let steps = n - seed.num_vertices();
    g.reserve(steps);
    let choices = (0..steps).map(|_| g.step(rng)).collect();
    Ok(GrowthTrajectory {
        rng_seed: None,
        delta,
        initial: seed.clone(),
        choices,
        final_state: g.into_tree(),
    })
}

/// Final tree only, without recording choices.
pub fn grow_lpam_tree<R: Rng + ?Sized>(seed: &PlaneTree, n: usize, delta: f64, rng: &mut R) -> Result<PlaneTree> {
    if n < seed.num_vertices() {
        return Err(param(format!("target size {n} is below the seed size {}", seed.num_vertices())));
    }
    let mut g = LpamGrower::new(seed.clone(), delta)?;
    g.reserve(n - seed.num_vertices());
    while g.num_vertices() < n {
        g.step(rng);
    }
    Ok(g.into_tree())
}

/// Degree-proportional attachment on the underlying unordered tree.
///
/// Same law on abstract trees as plane attachment with `delta = 0`, without
/// tracking corners: the new vertex joins the endpoint of a uniform
/// half-edge.
pub fn grow_free_tree<R: Rng + ?Sized>(seed: &Tree, n: usize, rng: &mut R) -> Result<Tree> {
    let n0 = seed.num_vertices();
    if n0 < 2 {
        return Err(param("free growth needs a seed with an edge"));
    }
    if n < n0 {
        return Err(param(format!("target size {n} is below the seed size {n0}")));
    }
    let mut adj: Vec<Vec<usize>> = (0..n0).map(|v| seed.neighbors(v).to_vec()).collect();
    adj.reserve(n - n0);
    let mut ends: Vec<usize> = Vec::with_capacity(2 * n);
    for (a, b) in seed.edges() {
        ends.push(a);
        ends.push(b);
    }
    for v in n0..n {
        let u = ends[rng.random_range(0..ends.len())];
        adj[u].push(v);
        adj.push(vec![u]);
        ends.push(u);
        ends.push(v);
    }
    Ok(Tree::from_adjacency_unchecked(adj))
}
