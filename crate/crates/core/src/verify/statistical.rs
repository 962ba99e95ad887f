use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::{replicate_rng, Outcome};
use crate::continuum::{
    circle_graph, dimension_estimate, line_breaking_cactus, mass_walk, sample_split_alpha, sample_triple_lengths,
    torus_grid, total_length_density,
};
use crate::error::{structure, Result};
use crate::gh_metric::{graph_hausdorff, graph_net_radius};
use crate::growth::{decompose_growth, exact_step_distribution, grow_free_tree, grow_lpam_tree, grow_remy, LpamGrower};
use crate::looptree::{glu_discrete_with_classes, loop_planted, Adjacency, LabeledDiscreteTree};
use crate::observables::{
    exact_martingale_moments, exact_tv_sequence, martingale_table, tv_lower_bound, tv_lower_bound_exact, ExactTable,
    FloatTable, Host,
};
use crate::stats::{chi_square, ks_test, log_log_slope, mean_stderr, median, variance};
use crate::tree_core::{AbstractTreeCode, DecoratedTree, PlaneTree, Tree};

const DECOMPOSITION_SAMPLES: u64 = 100_000;

pub(super) fn seed_decomposition(seed: u64) -> Result<Outcome> {
    let path3 = PlaneTree::path(3);
    let n = 5;
    let exact = exact_step_distribution(&path3, n)?;
    let mut counts: BTreeMap<AbstractTreeCode, u64> = exact.support.keys().map(|k| (k.clone(), 0)).collect();
    let mut bad_urns = 0u64;
    let mut outside = 0u64;
    for r in 0..DECOMPOSITION_SAMPLES {
        let d = decompose_growth(&path3, n, &mut replicate_rng(seed, 6, r))?;
        if !d.urn.is_consistent((n - path3.num_vertices()) as u64) {
            bad_urns += 1;
        }
        match counts.get_mut(&d.tree.canonical_code()) {
            Some(c) => *c += 1,
            None => outside += 1,
        }
    }
    let observed: Vec<u64> = counts.values().copied().collect();
    let expected: Vec<f64> = counts
        .keys()
        .map(|k| exact.probability(k).to_f64().unwrap_or(f64::NAN) * DECOMPOSITION_SAMPLES as f64)
        .collect();
    let (stat, df, p) = chi_square(&observed, &expected)?;
    let mut o = Outcome::new();
    o.measure("chi2", stat);
    o.measure("p", p);
    o.check(outside == 0 && p > 0.001, format!("chi2={stat:.3} df={df} p={p:.4} over {} classes", counts.len()));
    o.check(bad_urns == 0, format!("{bad_urns} inconsistent urns"));
    Ok(o)
}

const TV_REPS: u64 = 100_000;

fn witness_tau() -> Result<DecoratedTree> {
    DecoratedTree::parse("(3(1)(1)(1))")
}

pub(super) fn discrimination(seed: u64) -> Result<Outcome> {
    let tau = witness_tau()?;
    let (small, large) = (500, 1000);
    let table: FloatTable = martingale_table(&tau, large)?;
    let seeds = [Tree::path(4), Tree::star(4)];
    let mut values = [[Vec::new(), Vec::new()], [Vec::new(), Vec::new()]];
    for (si, s) in seeds.iter().enumerate() {
        for r in 0..TV_REPS {
            let mut rng = replicate_rng(seed, 7, ((si as u64) << 32) | r);
            let t = grow_free_tree(s, small, &mut rng)?;
            values[si][0].push(table.value_on_host(&Host::new(&t))?);
            let t = grow_free_tree(&t, large, &mut rng)?;
            values[si][1].push(table.value_on_host(&Host::new(&t))?);
        }
    }
    let mut o = Outcome::new();
    let mut bounds = Vec::new();
    for (i, n) in [small, large].into_iter().enumerate() {
        let (m1, v1) = (mean_stderr(&values[0][i]).0, variance(&values[0][i]));
        let (m2, v2) = (mean_stderr(&values[1][i]).0, variance(&values[1][i]));
        let lb = tv_lower_bound(m1, v1, m2, v2)?;
        o.measure(format!("tv_lb_{n}"), lb);
        o.check(lb > 0.02, format!("n={n}: means {m1:.4}/{m2:.4}, variances {v1:.4}/{v2:.4}, bound {lb:.4}"));
        bounds.push(lb);
    }
    let rel = (bounds[0] - bounds[1]).abs() / bounds[0].max(bounds[1]);
    o.measure("relative_difference", rel);
    o.check(rel < 0.2, format!("relative difference {rel:.4}"));

    let exact_max = 9;
    let exact_table: ExactTable = martingale_table(&tau, exact_max)?;
    let (p4, s4) = (PlaneTree::path(4), PlaneTree::star(4));
    let seq = exact_tv_sequence(&p4, &s4, exact_max)?;
    let monotone = seq.windows(2).all(|w| w[1].1 <= w[0].1);
    o.check(monotone, format!("exact TV nonincreasing for n in 4..={exact_max}"));
    for (n, tv) in &seq {
        let (m1, v1) = exact_martingale_moments(&exact_table, &p4, *n)?;
        let (m2, v2) = exact_martingale_moments(&exact_table, &s4, *n)?;
        let lb = tv_lower_bound_exact(&m1, &v1, &m2, &v2)?;
        if *n == seq[0].0 {
            o.note(format!("exact martingale means {:.5} / {:.5}", m1.to_f64().unwrap_or(f64::NAN), m2.to_f64().unwrap_or(f64::NAN)));
        }
        let (tvf, lbf) = (tv.to_f64().unwrap_or(f64::NAN), lb.to_f64().unwrap_or(f64::NAN));
        o.measure(format!("exact_tv_{n}"), tvf);
        o.check(*tv >= lb, format!("n={n}: TV {tvf:.5} >= bound {lbf:.5}"));
    }
    Ok(o)
}

const DEGREE_REPS: u64 = 200;

pub(super) fn degree_scaling(seed: u64) -> Result<Outcome> {
    let sizes: Vec<usize> = (10..=16).map(|e| 1usize << e).collect();
    let mut o = Outcome::new();
    for (delta, target) in [(0.0, 0.5), (1.0, 1.0 / 3.0)] {
        let mut maxima = vec![Vec::with_capacity(DEGREE_REPS as usize); sizes.len()];
        for r in 0..DEGREE_REPS {
            let mut rng = replicate_rng(seed, 8, ((delta as u64) << 32) | r);
            let mut g = LpamGrower::new(PlaneTree::planted_vertex(), delta)?;
            let mut max = g.tree().degree(0);
            let mut next = 0;
            while next < sizes.len() {
                let c = g.step(&mut rng);
                max = max.max(g.tree().degree(c.vertex));
                if g.num_vertices() == sizes[next] {
                    maxima[next].push(max as f64);
                    next += 1;
                }
            }
        }
        let medians: Vec<f64> = maxima.iter().map(|m| median(m)).collect();
        let x: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
        let fit = log_log_slope(&x, &medians)?;
        o.measure(format!("slope_delta_{delta}"), fit.slope);
        o.check(
            (fit.slope - target).abs() <= 0.05,
            format!("delta={delta}: slope {:.4} (target {target:.4}), medians {medians:?}", fit.slope),
        );
    }
    Ok(o)
}

const MOMENT_REPS: u64 = 1000;

pub(super) fn edge_moment(seed: u64) -> Result<Outcome> {
    let tau = DecoratedTree::parse("(1(1))")?;
    let sizes: Vec<usize> = (8..=14).map(|e| 1usize << e).collect();
    let mut sums = vec![0f64; sizes.len()];
    for r in 0..MOMENT_REPS {
        let mut rng = replicate_rng(seed, 9, r);
        let mut g = LpamGrower::new(PlaneTree::planted_vertex(), 0.0)?;
        for (i, &n) in sizes.iter().enumerate() {
            while g.num_vertices() < n {
                g.step(&mut rng);
            }
            sums[i] += Host::new(&g.tree().to_tree()).d_tau(&tau) as f64;
        }
    }
    let means: Vec<f64> = sums.iter().map(|s| s / MOMENT_REPS as f64).collect();
    let x: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let fit = log_log_slope(&x, &means)?;
    let mut o = Outcome::new();
    o.measure("slope", fit.slope);
    o.measure("slope_stderr", fit.slope_stderr);
    let ratios: Vec<String> = sizes.iter().zip(&means).map(|(&n, m)| format!("{:.3}", m / n as f64)).collect();
    o.check(
        (fit.slope - 1.0).abs() <= 0.1,
        format!("slope {:.4} +- {:.4} (target 1.0), mean/n {ratios:?}", fit.slope, fit.slope_stderr),
    );
    Ok(o)
}

pub(super) fn net_bound(seed: u64) -> Result<Outcome> {
    let n = 10_000;
    let b = grow_remy(n, &mut replicate_rng(seed, 10, 0))?.final_state;
    let tree = b.to_tree();
    let binary = Adjacency::from_edges(b.num_vertices(), b.edges());
    let (glu, class) = glu_discrete_with_classes(&LabeledDiscreteTree::from(&b))?;
    let glu_adj = glu.adjacency();
    let everything: Vec<usize> = (0..glu.num_vertices()).collect();
    let mut o = Outcome::new();
    let mut prev = u32::MAX;
    for k in [10, 100, 1000] {
        let leaves = &b.leaves()[..=k];
        let mut image: Vec<usize> = tree.span(leaves)?.into_iter().map(|v| class[v]).collect();
        image.sort_unstable();
        image.dedup();
        let h = graph_hausdorff(&glu_adj, &image, &everything)?;
        let net = graph_net_radius(&binary, leaves)?;
        o.measure(format!("hausdorff_{k}"), f64::from(h));
        o.measure(format!("net_radius_{k}"), f64::from(net));
        o.check(h <= 2 * net, format!("k={k}: Hausdorff {h} <= 2 x net radius {net}"));
        o.check(h < prev, format!("k={k}: decreasing"));
        prev = h;
    }
    Ok(o)
}

const DIAMETER_REPS: u64 = 200;
const LOOP_SIZE: usize = 100_000;
const CIRCLES: usize = 10_000;
const CIRCLE_RESOLUTION: f64 = 16.0;

pub(super) fn diameter_constant(seed: u64) -> Result<Outcome> {
    let scale = (LOOP_SIZE as f64).sqrt();
    let mut loops = Vec::new();
    let mut lines = Vec::new();
    for r in 0..DIAMETER_REPS {
        let mut rng = replicate_rng(seed, 11, r);
        let t = grow_lpam_tree(&PlaneTree::planted_vertex(), LOOP_SIZE, 0.0, &mut rng)?;
        loops.push(loop_planted(&t)?.to_cactus()?.diameter()? / scale);
        let mut rng = replicate_rng(seed, 11, (1 << 32) | r);
        lines.push(line_breaking_cactus(CIRCLES, &mut rng, CIRCLE_RESOLUTION)?.1.diameter()?);
    }
    let (ml, sl) = mean_stderr(&loops);
    let (mb, sb) = mean_stderr(&lines);
    let target = 2.0 * 2f64.sqrt();
    let ratio = ml / mb;
    let rel = (ratio / target - 1.0).abs();
    let mut o = Outcome::new();
    o.measure("mean_scaled_loop_diameter", ml);
    o.measure("mean_line_breaking_diameter", mb);
    o.measure("ratio", ratio);
    o.note(format!(
        "loop {ml:.4} +- {sl:.4}, line-breaking {mb:.4} +- {sb:.4} (discretization error <= {:.4})",
        0.5 / CIRCLE_RESOLUTION
    ));
    o.check(rel <= 0.15, format!("ratio {ratio:.4} vs {target:.4}: relative error {rel:.4}"));
    Ok(o)
}

pub(super) fn dimension(seed: u64) -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut rng = replicate_rng(seed, 12, 0);
    let geometric = |lo: f64, hi: f64, k: usize| -> Vec<f64> {
        (0..k).map(|i| lo * (hi / lo).powf(i as f64 / (k - 1) as f64)).collect()
    };
    let circle = dimension_estimate(&circle_graph(20_000), 20, &geometric(200.0, 2000.0, 10), &mut rng)?;
    o.measure("circle_slope", circle.slope());
    o.check((circle.slope() - 1.0).abs() <= 0.1, format!("circle fixture slope {:.4}", circle.slope()));
    let grid = dimension_estimate(&torus_grid(300), 20, &geometric(6.0, 60.0, 10), &mut rng)?;
    o.measure("grid_slope", grid.slope());
    o.check((grid.slope() - 2.0).abs() <= 0.1, format!("grid fixture slope {:.4}", grid.slope()));
    if !o.passed {
        return Ok(o);
    }
    let t = grow_lpam_tree(&PlaneTree::planted_vertex(), LOOP_SIZE, 0.0, &mut rng)?;
    let lt = loop_planted(&t)?;
    let diam = lt.to_cactus()?.diameter()?;
    let radii = geometric(0.02 * diam, 0.2 * diam, 10);
    if radii[0] < 1.0 {
        return Err(structure("looptree too small for the radius range"));
    }
    let est = dimension_estimate(&lt.adjacency(), 200, &radii, &mut rng)?;
    o.measure("looptree_slope", est.slope());
    o.measure("looptree_diameter", diam);
    o.check(
        (1.7..=2.3).contains(&est.slope()),
        format!("looptree n={LOOP_SIZE}: slope {:.4} +- {:.4}, diameter {diam}", est.slope(), est.fit.slope_stderr),
    );
    Ok(o)
}

const SAMPLER_DRAWS: usize = 100_000;

/// Composite Simpson rule on `[a, b]` with `m` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let inner: f64 = (1..m).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

pub(super) fn samplers(seed: u64) -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut rng = replicate_rng(seed, 13, 0);
    let alphas: Vec<f64> = (0..SAMPLER_DRAWS).map(|_| sample_split_alpha(&mut rng)).collect();
    let (d, p) = ks_test(&alphas, |x| x.clamp(0.0, 1.0).sqrt());
    o.measure("ks_p", p);
    o.check(p > 0.01, format!("split proportion KS D={d:.5} p={p:.4}"));

    let walk = mass_walk(SAMPLER_DRAWS, &mut rng)?;
    let mean_inc = walk[SAMPLER_DRAWS - 1] / SAMPLER_DRAWS as f64;
    o.measure("mean_increment", mean_inc);
    o.check((mean_inc / 2.0 - 1.0).abs() <= 0.02, format!("mass walk mean increment {mean_inc:.4}"));

    let (hi, m) = (10.0, 200_000);
    let mass = simpson(total_length_density, 0.0, hi, m);
    let oracle = simpson(|s| s * total_length_density(s), 0.0, hi, m);
    o.measure("density_mass", mass);
    o.check((mass - 1.0).abs() <= 1e-6, format!("total-length density integrates to {mass:.10}"));
    let totals: Vec<f64> = (0..SAMPLER_DRAWS)
        .map(|_| {
            let (a, b, c) = sample_triple_lengths(&mut rng);
            a + b + c
        })
        .collect();
    let (mean, se) = mean_stderr(&totals);
    o.measure("mean_total_length", mean);
    o.measure("oracle_total_length", oracle);
    o.check(
        (mean - oracle).abs() <= 3.0 * se,
        format!("mean total length {mean:.5} +- {se:.5} vs oracle {oracle:.5}"),
    );
    Ok(o)
}
