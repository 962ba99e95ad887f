use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::{replicate_rng, Outcome};
use crate::error::Result;
use crate::growth::{ford_paths, merge_law, plane_lpam_paths, remy_paths, CoupledGrower, LabeledBinaryTree};
use crate::looptree::{glu_discrete, glu_discrete_with_classes, loop_planted, LabeledDiscreteTree, LooptreeCode};
use crate::observables::{
    enumerate_decorated, falling_factorial, martingale_table, martingale_value, one_step_expectation, recurrence_rhs,
    ExactTable,
};
use crate::tree_core::{enumerate_abstract_trees, DecoratedTree, PlaneTree, Tree};

const SWEEP_MAX_VERTICES: usize = 7;

fn sweep_taus() -> Result<Vec<DecoratedTree>> {
    Ok(enumerate_decorated(4, 4)?.elements().iter().filter(|t| t.weight() >= 2).cloned().collect())
}

fn sweep_trees() -> Result<Vec<Tree>> {
    let mut out = Vec::new();
    for n in 2..=SWEEP_MAX_VERTICES {
        out.extend(enumerate_abstract_trees(n)?.into_values());
    }
    Ok(out)
}

fn rat(p: usize, q: usize) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub(super) fn recurrence_sweep(_seed: u64) -> Result<Outcome> {
    let (taus, trees) = (sweep_taus()?, sweep_trees()?);
    let mut o = Outcome::new();
    let mut mismatches = Vec::new();
    for tau in &taus {
        for t in &trees {
            if recurrence_rhs(tau, t)? != one_step_expectation(tau, t)? {
                mismatches.push(format!("{} on {}", tau.code(), t.canonical_code()));
            }
        }
    }
    let pairs = taus.len() * trees.len();
    o.measure("pairs", pairs as f64);
    o.measure("mismatches", mismatches.len() as f64);
    o.check(mismatches.is_empty(), format!("{pairs} (tau, tree) pairs, {} mismatches {mismatches:?}", mismatches.len()));
    Ok(o)
}

pub(super) fn martingale_sweep(_seed: u64) -> Result<Outcome> {
    let (taus, trees) = (sweep_taus()?, sweep_trees()?);
    let mut o = Outcome::new();
    let mut mismatches = Vec::new();
    for tau in &taus {
        let table: ExactTable = martingale_table(tau, SWEEP_MAX_VERTICES + 1)?;
        for t in &trees {
            let n = t.num_vertices();
            let mut expect = BigRational::zero();
            for v in 0..n {
                expect += rat(t.degree(v), 2 * n - 2) * martingale_value(&table, &t.with_leaf(v))?;
            }
            if expect != martingale_value(&table, t)? {
                mismatches.push(format!("{} on {}", tau.code(), t.canonical_code()));
            }
        }
    }
    let pairs = taus.len() * trees.len();
    o.measure("pairs", pairs as f64);
    o.measure("mismatches", mismatches.len() as f64);
    o.check(mismatches.is_empty(), format!("{pairs} (tau, tree) pairs, {} mismatches {mismatches:?}", mismatches.len()));
    Ok(o)
}

pub(super) fn falling_factorials(_seed: u64) -> Result<Outcome> {
    let ff = |k: i64, j: i64| falling_factorial(k, j);
    let mut o = Outcome::new();
    let mut failures = Vec::new();
    let mut cases = 0;
    for d in 1..=20i64 {
        for l in 1..=d {
            cases += 1;
            let lu = l as u128;
            let du = d as u128;
            let first = ff(d + 1, l)? == ff(d, l)? + lu * ff(d, l - 1)?;
            let second = du * ff(d, l - 1)? == ff(d, l)? + (lu - 1) * ff(d, l - 1)?;
            let third = du * ff(d + 1, l)? == ff(d, l + 1)? + 2 * lu * ff(d, l)? + lu * (lu - 1) * ff(d, l - 1)?;
            for (name, ok) in [("first", first), ("second", second), ("third", third)] {
                if !ok {
                    failures.push(format!("{name} at d={d}, l={l}"));
                }
            }
        }
    }
    o.measure("cases", cases as f64);
    o.check(failures.is_empty(), format!("{cases} (d, l) pairs x 3 identities, failures {failures:?}"));
    Ok(o)
}

fn double_factorial(m: usize) -> usize {
    (1..=m).rev().step_by(2).product()
}

pub(super) fn remy_uniformity(_seed: u64) -> Result<Outcome> {
    let mut o = Outcome::new();
    for (splits, shapes) in [(2, 3), (3, 15), (4, 105)] {
        let df = double_factorial(2 * splits - 1);
        let law = merge_law(remy_paths(splits + 1)?.into_iter().map(|(b, p)| (b.shape_code(), p)));
        let uniform = law.values().all(|p| *p == rat(1, df));
        o.measure(format!("shapes_{splits}"), law.len() as f64);
        o.check(
            law.len() == shapes && law.len() == df && uniform,
            format!("{splits} splits: {} shapes, each 1/{df}: {uniform}", law.len()),
        );
    }
    Ok(o)
}

/// Checks that the class map of the coupling is a multigraph isomorphism
/// from Glu of the binary tree onto Loop of the planted tree.
fn coupling_witness(g: &CoupledGrower) -> Result<bool> {
    let (glu, class) = glu_discrete_with_classes(&LabeledDiscreteTree::from(g.binary()))?;
    let lp = loop_planted(g.plane())?;
    let n = lp.num_vertices();
    if glu.num_vertices() != n {
        return Ok(false);
    }
    let mut phi = vec![usize::MAX; n];
    for (&c, &e) in class.iter().zip(g.vertex_to_edge()) {
        if phi[c] == usize::MAX {
            phi[c] = e;
        } else if phi[c] != e {
            return Ok(false);
        }
    }
    let mut hit = vec![false; n];
    for &e in &phi {
        if e >= n || std::mem::replace(&mut hit[e], true) {
            return Ok(false);
        }
    }
    let mut mapped: Vec<(usize, usize)> = glu
        .edges()
        .iter()
        .map(|&(a, b)| (phi[a].min(phi[b]), phi[a].max(phi[b])))
        .collect();
    mapped.sort_unstable();
    Ok(mapped == lp.edge_multiset())
}

const COUPLING_RUNS: u64 = 10_000;
const COUPLING_SIZE: usize = 50;
const EXACT_LAW_MAX: usize = 5;

type LooptreeLaw = BTreeMap<LooptreeCode, BigRational>;

fn glu_law(paths: Vec<(LabeledBinaryTree, BigRational)>) -> Result<LooptreeLaw> {
    let items = paths
        .into_iter()
        .map(|(b, p)| Ok((glu_discrete(&LabeledDiscreteTree::from(&b))?.canonical_form(false)?, p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_law(items))
}

fn loop_law(n: usize, delta: &BigRational) -> Result<LooptreeLaw> {
    let items = plane_lpam_paths(&PlaneTree::planted_vertex(), n - 1, delta)?
        .into_iter()
        .map(|(t, p)| Ok((loop_planted(&t)?.canonical_form(false)?, p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_law(items))
}

pub(super) fn coupling(seed: u64) -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut bad_steps = 0u64;
    let mut bad_final = 0u64;
    for r in 0..COUPLING_RUNS {
        let mut rng = replicate_rng(seed, 5, r);
        let mut g = CoupledGrower::new();
        for k in 1..=COUPLING_SIZE {
            if !coupling_witness(&g)? {
                bad_steps += 1;
            }
            if k < COUPLING_SIZE {
                let e = rng.random_range(0..g.binary().num_edges());
                g.apply(e)?;
            }
        }
        let glu = glu_discrete(&LabeledDiscreteTree::from(g.binary()))?;
        if glu.canonical_form(false)? != loop_planted(g.plane())?.canonical_form(false)? {
            bad_final += 1;
        }
    }
    o.measure("failed_steps", bad_steps as f64);
    o.measure("failed_final_forms", bad_final as f64);
    o.check(
        bad_steps == 0 && bad_final == 0,
        format!(
            "{COUPLING_RUNS} coupled runs to n={COUPLING_SIZE}: {bad_steps} steps without isomorphism, {bad_final} final canonical mismatches"
        ),
    );
    for n in 1..=EXACT_LAW_MAX {
        let glu = glu_law(remy_paths(n)?)?;
        let lp = loop_law(n, &BigRational::zero())?;
        o.check(glu == lp, format!("n={n}: {} isomorphism classes, laws equal: {}", glu.len(), glu == lp));
    }
    Ok(o)
}

pub(super) fn ford_identity(_seed: u64) -> Result<Outcome> {
    let mut o = Outcome::new();
    for delta in [0usize, 1] {
        let alpha = rat(1, 2 + delta);
        let d = BigRational::from_integer(BigInt::from(delta));
        for n in 1..=EXACT_LAW_MAX {
            let lp = loop_law(n, &d)?;
            let ford = glu_law(ford_paths(n, &alpha, true)?)?;
            o.check(lp == ford, format!("delta={delta} n={n}: {} classes, laws equal: {}", lp.len(), lp == ford));
        }
    }
    let half = rat(1, 2);
    for n in 1..=EXACT_LAW_MAX {
        let shapes = |paths: Vec<(LabeledBinaryTree, BigRational)>| merge_law(paths.into_iter().map(|(b, p)| (b.shape_code(), p)));
        let remy = shapes(remy_paths(n)?);
        let total: BigRational = remy.values().sum();
        for modified in [false, true] {
            let ford = shapes(ford_paths(n, &half, modified)?);
            o.check(
                ford == remy && total.is_one(),
                format!("alpha=1/2 modified={modified} n={n}: matches Remy over {} shapes: {}", remy.len(), ford == remy),
            );
        }
    }
    Ok(o)
}
