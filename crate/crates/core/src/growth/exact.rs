use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};

use super::binary::LabeledBinaryTree;
use super::lpam::corner_law;
use crate::error::{guard, param, structure, Result};
use crate::tree_core::{AbstractTreeCode, Corner, PlaneTree};

/// Exact law of a random tree over isomorphism classes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExactDistribution {
    pub support: BTreeMap<AbstractTreeCode, BigRational>,
}

impl ExactDistribution {
    pub fn total(&self) -> BigRational {
        self.support.values().fold(BigRational::zero(), |a, p| a + p)
    }

    pub fn probability(&self, code: &AbstractTreeCode) -> BigRational {
        self.support.get(code).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `{code: "p/q"}`.
    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> =
            self.support.iter().map(|(k, p)| (k.0.clone(), Value::String(p.to_string()))).collect();
        Value::Object(map)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| structure("distribution JSON must be an object"))?;
        let mut support = BTreeMap::new();
        for (k, v) in obj {
            let text = v.as_str().ok_or_else(|| structure("probabilities are strings 'p/q'"))?;
            let p: BigRational = text.parse().map_err(|_| structure(format!("bad rational '{text}'")))?;
            support.insert(AbstractTreeCode(k.clone()), p);
        }
        Ok(ExactDistribution { support })
    }

    /// Total variation distance `½ Σ |p − q|`.
    pub fn total_variation(&self, other: &ExactDistribution) -> BigRational {
        let mut sum = BigRational::zero();
        for (k, p) in &self.support {
            sum += (p - other.probability(k)).abs();
        }
        for (k, q) in &other.support {
            if !self.support.contains_key(k) {
                sum += q.clone();
            }
        }
        sum / BigRational::from_integer(BigInt::from(2))
    }
}

/// Largest number of growth steps the exact engines expand.
pub const EXACT_STEP_GUARD: usize = 6;

/// Law of the degree-proportional chain from `seed` at `n` vertices, with
/// one plane representative per class.
pub fn exact_step_states(seed: &PlaneTree, n: usize) -> Result<BTreeMap<AbstractTreeCode, (PlaneTree, BigRational)>> {
    if n < seed.num_vertices() {
        return Err(param(format!("target size {n} is below the seed size {}", seed.num_vertices())));
    }
    if n > seed.num_vertices() + EXACT_STEP_GUARD {
        return Err(guard(format!("exact expansion allows at most {EXACT_STEP_GUARD} steps")));
    }
    if seed.corner_count() == 0 {
        return Err(param("seed must have an edge or be planted"));
    }
    let mut level = BTreeMap::from([(seed.canonical_code(), (seed.clone(), BigRational::one()))]);
    for _ in seed.num_vertices()..n {
        let mut next: BTreeMap<AbstractTreeCode, (PlaneTree, BigRational)> = BTreeMap::new();
        for (t, p) in level.values() {
            let total = BigRational::from_integer(BigInt::from(t.corner_count()));
            for v in 0..t.num_vertices() {
                let w = BigRational::from_integer(BigInt::from(t.degree(v))) / &total * p;
                let g = t.grafted(Corner { vertex: v, slot: 0 })?;
                match next.entry(g.canonical_code()) {
                    std::collections::btree_map::Entry::Occupied(mut e) => e.get_mut().1 += w,
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert((g, w));
                    }
                }
            }
        }
        level = next;
    }
    Ok(level)
}

pub fn exact_step_distribution(seed: &PlaneTree, n: usize) -> Result<ExactDistribution> {
    let support = exact_step_states(seed, n)?.into_iter().map(|(k, (_, p))| (k, p)).collect();
    Ok(ExactDistribution { support })
}

/// Every path of a finite-branching chain, with its probability.
pub fn expand_paths<S, F>(init: S, steps: usize, mut transitions: F) -> Result<Vec<(S, BigRational)>>
where
    F: FnMut(&S) -> Result<Vec<(S, BigRational)>>,
{
    if steps > EXACT_STEP_GUARD {
        return Err(guard(format!("exact expansion allows at most {EXACT_STEP_GUARD} steps")));
    }
    let mut level = vec![(init, BigRational::one())];
    for _ in 0..steps {
        let mut next = Vec::new();
        for (s, p) in &level {
            for (t, q) in transitions(s)? {
                if !q.is_zero() {
                    next.push((t, q * p));
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// Sums probabilities sharing a key.
pub fn merge_law<K: Ord>(items: impl IntoIterator<Item = (K, BigRational)>) -> BTreeMap<K, BigRational> {
    let mut out: BTreeMap<K, BigRational> = BTreeMap::new();
    for (k, p) in items {
        *out.entry(k).or_insert_with(BigRational::zero) += p;
    }
    out
}

/// Plane affine attachment from `seed`, all paths of `steps` grafts.
pub fn plane_lpam_paths(seed: &PlaneTree, steps: usize, delta: &BigRational) -> Result<Vec<(PlaneTree, BigRational)>> {
    expand_paths(seed.clone(), steps, |t| {
        corner_law(t, delta)?
            .into_iter()
            .map(|(c, p)| Ok((t.grafted(c)?, p)))
            .collect()
    })
}

/// All paths of Rémy's algorithm ending at `B_n`.
pub fn remy_paths(n: usize) -> Result<Vec<(LabeledBinaryTree, BigRational)>> {
    if n == 0 {
        return Err(param("n >= 1"));
    }
    expand_paths(LabeledBinaryTree::new(), n - 1, |b| {
        let p = BigRational::new(BigInt::one(), BigInt::from(b.num_edges()));
        (0..b.num_edges())
            .map(|e| {
                let mut c = b.clone();
                c.split(e)?;
                Ok((c, p.clone()))
            })
            .collect()
    })
}

/// Split probabilities of Ford's rule on `b`.
pub fn ford_split_law(b: &LabeledBinaryTree, alpha: &BigRational, modified: bool) -> Vec<BigRational> {
    let tree = b.to_tree();
    let root = b.leaves()[0];
    let weights: Vec<BigRational> = b
        .edges()
        .iter()
        .map(|&(x, y)| {
            let at_leaf = [x, y].iter().any(|&v| v != root && tree.degree(v) == 1);
            if at_leaf {
                BigRational::one() - alpha
            } else {
                alpha.clone()
            }
        })
        .collect();
    let total = weights.iter().fold(BigRational::zero(), |a, w| a + w);
    let m = b.num_edges();
    let base: Vec<BigRational> = if total.is_zero() {
        vec![BigRational::new(BigInt::one(), BigInt::from(m)); m]
    } else {
        weights.into_iter().map(|w| w / &total).collect()
    };
    if !modified {
        return base;
    }
    let classes = b.geodesic_classes();
    let mut class_mass: BTreeMap<usize, (BigRational, usize)> = BTreeMap::new();
    for (e, p) in base.iter().enumerate() {
        let entry = class_mass.entry(classes[e]).or_insert_with(|| (BigRational::zero(), 0));
        entry.0 += p;
        entry.1 += 1;
    }
    classes
        .iter()
        .map(|c| {
            let (mass, len) = &class_mass[c];
            mass / BigRational::from_integer(BigInt::from(*len))
        })
        .collect()
}

/// All paths of Ford's algorithm ending at `F_n`.
pub fn ford_paths(n: usize, alpha: &BigRational, modified: bool) -> Result<Vec<(LabeledBinaryTree, BigRational)>> {
    if n == 0 {
        return Err(param("n >= 1"));
    }
    if alpha.is_negative() || *alpha > BigRational::one() {
        return Err(param("alpha must lie in [0, 1]"));
    }
    expand_paths(LabeledBinaryTree::new(), n - 1, |b| {
        ford_split_law(b, alpha, modified)
            .into_iter()
            .enumerate()
            .map(|(e, p)| {
                let mut c = b.clone();
                c.split(e)?;
                Ok((c, p))
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn path3_one_step() {
        let d = exact_step_distribution(&PlaneTree::path(3), 4).unwrap();
        let star = PlaneTree::star(4).canonical_code();
        let path = PlaneTree::path(4).canonical_code();
        assert_eq!(d.probability(&star), rat(1, 2));
        assert_eq!(d.probability(&path), rat(1, 2));
        assert_eq!(d.total(), rat(1, 1));
    }

    #[test]
    fn guard_and_deterministic_states() {
        assert!(exact_step_distribution(&PlaneTree::path(3), 10).is_err());
        let a = exact_step_distribution(&PlaneTree::path(4), 4).unwrap();
        let b = exact_step_distribution(&PlaneTree::star(4), 4).unwrap();
        assert_eq!(a.total_variation(&b), rat(1, 1));
        assert_eq!(a.total_variation(&a), rat(0, 1));
    }

    #[test]
    fn json_round_trip() {
        let d = exact_step_distribution(&PlaneTree::path(3), 6).unwrap();
        assert_eq!(ExactDistribution::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn ford_weights_at_two_leaves() {
        let mut b = LabeledBinaryTree::new();
        b.split(0).unwrap();
        let law = ford_split_law(&b, &rat(0, 1), false);
        assert_eq!(law, vec![rat(0, 1), rat(1, 2), rat(1, 2)]);
        let half = ford_split_law(&b, &rat(1, 2), true);
        assert_eq!(half.iter().fold(rat(0, 1), |a, p| a + p), rat(1, 1));
    }
}
