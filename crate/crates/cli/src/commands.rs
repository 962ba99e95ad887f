use std::fmt::{Display, Write as _};
use std::path::Path;
use std::time::Duration;

use num_rational::BigRational;
use prefattach::continuum::{circle_graph, dimension_estimate, line_breaking_cactus, line_breaking_space, torus_grid};
use prefattach::gh_metric::{gh_exact_small, gh_upper_from_correspondence, Correspondence, FiniteMetricSpace};
use prefattach::growth::{grow_ford, grow_free_tree, grow_lpam, grow_lpam_tree, grow_remy, merge_law, plane_lpam_paths};
use prefattach::looptree::{loop_planted, loop_tree, shortest_path_metric, Looptree, PathMetric};
use prefattach::observables::{
    distinguishing_tau, exact_martingale_moments, exact_tv_sequence, martingale_table, tv_lower_bound, tv_lower_bound_exact,
    ExactTable, FloatTable, Host, MartingaleTable, Scalar,
};
use prefattach::rng::{from_seed, stream};
use prefattach::stats::{mean_stderr, variance};
use prefattach::tree_core::{DecoratedTree, PlaneTree, Tree};
use prefattach::verify;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::*;
use crate::config::{config_hash, to_toml};
use crate::output::{emit, Artifact, Header};
use crate::seeds;
use crate::{CliError, CliResult};

pub fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let command = &cli.command;
    let header = Header { command: command.name(), config_sha256: config_hash(command), seed: command.seed() };
    let mut verdict = Ok(());
    let artifacts = match command {
        Command::Grow(a) => grow(a, &header)?,
        Command::Looptree(a) => looptree(a, &header)?,
        Command::Observe(a) => observe(a, &header)?,
        Command::Discriminate(a) => discriminate(a, &header)?,
        Command::ExactTv(a) => exact_tv(a, &header)?,
        Command::Ghdist(a) => ghdist(a, &header)?,
        Command::Dimension(a) => dimension(a, &header)?,
        Command::Linebreak(a) => linebreak(a, &header)?,
        Command::Verify(a) => {
            let (artifacts, passed) = verify_cmd(a, &header)?;
            if !passed {
                verdict = Err(CliError::VerificationFailed);
            }
            artifacts
        }
    };
    emit(cli.out.as_deref(), &artifacts, &to_toml(command)?)?;
    verdict
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn checkpoints(list: &[usize]) -> CliResult<Vec<usize>> {
    let mut sizes = list.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.is_empty() {
        return Err(CliError::Usage("--n needs at least one size".into()));
    }
    Ok(sizes)
}

fn pattern(code: &str) -> CliResult<DecoratedTree> {
    Ok(DecoratedTree::parse(code)?)
}

fn grow(a: &GrowArgs, h: &Header) -> CliResult<Vec<Artifact>> {
    let binary = |traj: prefattach::growth::BinaryTrajectory| {
        let b = &traj.final_state;
        json!({
            "model": a.model,
            "splits": traj.splits,
            "edges": b.edges(),
            "leaves": b.leaves(),
            "shape": b.shape_code(),
        })
    };
    match (a.model, a.arithmetic) {
        (Model::Lpam, Arithmetic::Float) => {
            let seed = seeds::plane(&a.seed_tree)?;
            let traj = grow_lpam(&seed, a.n, a.delta, a.rng)?;
            Ok(vec![h.text("trajectory.jsonl", &traj.to_jsonl())])
        }
        (Model::Lpam, Arithmetic::Exact) => {
            let seed = seeds::plane(&a.seed_tree)?;
            let delta = BigRational::from_float(a.delta).ok_or_else(|| CliError::Usage("--delta must be finite".into()))?;
            let steps = a.n.checked_sub(seed.num_vertices()).ok_or_else(|| CliError::Usage("--n is below the seed size".into()))?;
            let paths = plane_lpam_paths(&seed, steps, &delta)?;
            let law = merge_law(paths.into_iter().map(|(t, p)| (t.canonical_code().0, p)));
            let law: serde_json::Map<String, Value> = law.into_iter().map(|(k, p)| (k, Value::String(p.to_string()))).collect();
            Ok(vec![h.json("law.json", json!({ "seed": seed.serialize(), "n": a.n, "delta": a.delta, "law": law }))])
        }
        (Model::Remy, Arithmetic::Float) => Ok(vec![h.json("binary.json", binary(grow_remy(a.n, &mut from_seed(a.rng))?))]),
        (Model::Ford, Arithmetic::Float) => {
            Ok(vec![h.json("binary.json", binary(grow_ford(a.n, a.alpha, a.modified, &mut from_seed(a.rng))?))])
        }
        (_, Arithmetic::Exact) => Err(CliError::Usage("exact laws are available for the lpam model".into())),
    }
}

fn build_loop(t: &PlaneTree) -> CliResult<Looptree> {
    Ok(if t.is_planted() { loop_planted(t)? } else { loop_tree(t)? })
}

fn full_metric(lt: &Looptree) -> CliResult<FiniteMetricSpace> {
    match shortest_path_metric(lt, None)? {
        PathMetric::Full(space) => Ok(space),
        PathMetric::Rows(_) => unreachable!("no centers were given"),
    }
}

fn looptree(a: &LooptreeArgs, h: &Header) -> CliResult<Vec<Artifact>> {
    let seed = seeds::plane(&a.seed_tree)?;
    let grow_one = |r: u64| -> CliResult<Looptree> { build_loop(&grow_lpam_tree(&seed, a.n, a.delta, &mut stream(a.rng, r))?) };
    let rows: CliResult<Vec<(usize, usize, f64)>> = (0..a.reps)
        .into_par_iter()
        .map(|r| {
            let lt = grow_one(r)?;
            Ok((lt.num_vertices(), lt.num_edges(), lt.to_cactus()?.diameter()?))
        })
        .collect();
    let mut csv = String::from("rep,vertices,edges,diameter,scaled_diameter\n");
    for (r, (v, e, d)) in rows?.into_iter().enumerate() {
        writeln!(csv, "{r},{v},{e},{d},{}", d / (a.n as f64).sqrt()).unwrap();
    }
    let mut out = vec![h.text("looptree.csv", &csv)];
    if a.reps == 1 || a.metric {
        let first = grow_one(0)?;
        if a.reps == 1 {
            out.push(h.json("looptree.json", first.to_json()));
        }
        if a.metric {
            out.push(h.text("metric.csv", &full_metric(&first)?.to_csv()));
        }
    }
    Ok(out)
}

fn observe_rows<S: Scalar + Display>(a: &ObserveArgs, seed: &Tree, tau: &DecoratedTree, sizes: &[usize]) -> CliResult<String> {
    let table: MartingaleTable<S> = martingale_table(tau, *sizes.last().unwrap())?;
    let runs: CliResult<Vec<Vec<(usize, u128, S)>>> = (0..a.reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(a.rng, r);
            let mut t = seed.clone();
            let mut rows = Vec::with_capacity(sizes.len());
            for &n in sizes {
                t = grow_free_tree(&t, n, &mut rng)?;
                let host = Host::new(&t);
                rows.push((n, host.d_tau(tau), table.value_on_host(&host)?));
            }
            Ok(rows)
        })
        .collect();
    let mut csv = format!("# tau: {}\nrep,n,d_tau,martingale\n", tau.code());
    for (r, rows) in runs?.into_iter().enumerate() {
        for (n, d, m) in rows {
            writeln!(csv, "{r},{n},{d},{m}").unwrap();
        }
    }
    Ok(csv)
}

fn observe(a: &ObserveArgs, h: &Header) -> CliResult<Vec<Artifact>> {
    let seed = seeds::plane(&a.seed_tree)?.to_tree();
    let tau = pattern(&a.tau)?;
    let sizes = checkpoints(&a.n)?;
    let csv = match a.arithmetic {
        Arithmetic::Float => observe_rows::<f64>(a, &seed, &tau, &sizes)?,
        Arithmetic::Exact => observe_rows::<BigRational>(a, &seed, &tau, &sizes)?,
    };
    Ok(vec![h.text("observe.csv", &csv)])
}

fn witness(tau: &Option<String>, s1: &Tree, s2: &Tree) -> CliResult<DecoratedTree> {
    match tau {
        Some(code) => pattern(code),
        None => Ok(distinguishing_tau(s1, s2)?),
    }
}

fn discriminate(a: &DiscriminateArgs, h: &Header) -> CliResult<Vec<Artifact>> {
    let seeds = [seeds::plane(&a.s1)?.to_tree(), seeds::plane(&a.s2)?.to_tree()];
    let tau = witness(&a.tau, &seeds[0], &seeds[1])?;
    let sizes = checkpoints(&a.n)?;
    let table: FloatTable = martingale_table(&tau, *sizes.last().unwrap())?;
    let mut samples = Vec::with_capacity(2);
    for (si, s) in seeds.iter().enumerate() {
        let runs: CliResult<Vec<Vec<f64>>> = (0..a.reps)
            .into_par_iter()
            .map(|r| {
                let mut rng = stream(a.rng, ((si as u64) << 32) | r);
                let mut t = s.clone();
                let mut values = Vec::with_capacity(sizes.len());
                for &n in &sizes {
                    t = grow_free_tree(&t, n, &mut rng)?;
                    values.push(table.value_on_host(&Host::new(&t))?);
                }
                Ok(values)
            })
            .collect();
        samples.push(runs?);
    }
    let mut csv = format!("# tau: {}\nn,mean1,var1,mean2,var2,tv_lb\n", tau.code());
    for (i, n) in sizes.iter().enumerate() {
        let column = |s: &Vec<Vec<f64>>| s.iter().map(|v| v[i]).collect::<Vec<f64>>();
        let (x, y) = (column(&samples[0]), column(&samples[1]));
        let (m1, v1, m2, v2) = (mean_stderr(&x).0, variance(&x), mean_stderr(&y).0, variance(&y));
        writeln!(csv, "{n},{m1},{v1},{m2},{v2},{}", tv_lower_bound(m1, v1, m2, v2)?).unwrap();
    }
    Ok(vec![h.text("discriminate.csv", &csv)])
}

fn exact_tv(a: &ExactTvArgs, h: &Header) -> CliResult<Vec<Artifact>> {
    let (p1, p2) = (seeds::plane(&a.s1)?, seeds::plane(&a.s2)?);
    let tau = witness(&a.tau, &p1.to_tree(), &p2.to_tree())?;
    let seq = exact_tv_sequence(&p1, &p2, a.n_max)?;
    let table: ExactTable = martingale_table(&tau, a.n_max)?;
    let f = |x: &BigRational| Scalar::to_f64(x);
    let mut csv = format!("# tau: {}\nn,tv,tv_exact,mean1,var1,mean2,var2,tv_lb,tv_lb_exact\n", tau.code());
    for (n, tv) in &seq {
        let (m1, v1) = exact_martingale_moments(&table, &p1, *n)?;
        let (m2, v2) = exact_martingale_moments(&table, &p2, *n)?;
        let lb = tv_lower_bound_exact(&m1, &v1, &m2, &v2)?;
        writeln!(csv, "{n},{},{tv},{},{},{},{},{},{lb}", f(tv), f(&m1), f(&v1), f(&m2), f(&v2), f(&lb)).unwrap();
    }
    Ok(vec![h.text("exact_tv.csv", &csv)])
}

fn read_correspondence(path: &Path) -> CliResult<Correspondence> {
    let text = read(path)?;
    let mut pairs = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == "i,j" {
            continue;
        }
        let pair = line.split_once(',').and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)));
        pairs.push(pair.ok_or_else(|| CliError::Usage(format!("{}:{}: expected i,j", path.display(), ln + 1)))?);
    }
    Ok(Correspondence::new(pairs))
}

fn ghdist(a: &GhdistArgs, h: &Header) -> CliResult<Vec<Artifact>> {
    let x = FiniteMetricSpace::from_csv(&read(&a.x)?)?;
    let y = FiniteMetricSpace::from_csv(&read(&a.y)?)?;
    let upper = match &a.correspondence {
        Some(p) => Some(gh_upper_from_correspondence(&x, &y, &read_correspondence(p)?)?),
        None => None,
    };
    let exact = if a.exact { Some(gh_exact_small(&x, &y)?) } else { None };
    let data = json!({
        "x_points": x.len(),
        "y_points": y.len(),
        "x_diameter": x.diameter(),
        "y_diameter": y.diameter(),
        "lower_bound": (x.diameter() - y.diameter()).abs() / 2.0,
        "upper_bound": upper,
        "exact": exact,
    });
    Ok(vec![h.json("ghdist.json", data)])
}

fn dimension(a: &DimensionArgs, h: &Header) -> CliResult<Vec<Artifact>> {
    if !(a.r_min > 0.0 && a.r_min < a.r_max) || a.steps < 2 {
        return Err(CliError::Usage("need 0 < --r-min < --r-max and --steps >= 2".into()));
    }
    let (adj, diameter) = match a.fixture {
        Fixture::Looptree => {
            let seed = seeds::plane(&a.seed_tree)?;
            let lt = build_loop(&grow_lpam_tree(&seed, a.n, a.delta, &mut stream(a.rng, 0))?)?;
            let d = lt.to_cactus()?.diameter()?;
            (lt.adjacency(), d)
        }
        Fixture::Circle => (circle_graph(a.n), (a.n / 2) as f64),
        Fixture::Grid => {
            let m = (a.n as f64).sqrt().round() as usize;
            (torus_grid(m), (2 * (m / 2)) as f64)
        }
    };
    let ratio = (a.r_max / a.r_min).powf(1.0 / (a.steps - 1) as f64);
    let radii: Vec<f64> = (0..a.steps).map(|i| a.r_min * diameter * ratio.powi(i as i32)).collect();
    let est = dimension_estimate(&adj, a.centers, &radii, &mut stream(a.rng, 1))?;
    let summary = format!(
        "vertices,diameter,slope,slope_stderr,intercept\n{},{diameter},{},{},{}\n",
        adj.num_vertices(),
        est.fit.slope,
        est.fit.slope_stderr,
        est.fit.intercept
    );
    Ok(vec![h.text("dimension.csv", &summary), h.text("ball_profile.csv", &est.profile.to_csv())])
}

fn linebreak(a: &LinebreakArgs, h: &Header) -> CliResult<Vec<Artifact>> {
    let rows: CliResult<Vec<(f64, f64)>> = (0..a.reps)
        .into_par_iter()
        .map(|r| {
            let (chain, cactus) = line_breaking_cactus(a.k, &mut stream(a.rng, r), a.resolution)?;
            Ok((chain.total_length(), cactus.diameter()?))
        })
        .collect();
    let mut csv = String::from("rep,circles,total_length,diameter\n");
    for (r, (len, d)) in rows?.into_iter().enumerate() {
        writeln!(csv, "{r},{},{len},{d}", a.k).unwrap();
    }
    let mut out = vec![h.text("linebreak.csv", &csv)];
    if a.metric {
        let space = line_breaking_space(a.k, &mut stream(a.rng, 0), a.resolution)?;
        out.push(h.text("metric.csv", &space.to_csv()));
    }
    Ok(out)
}

fn verify_cmd(a: &VerifyArgs, h: &Header) -> CliResult<(Vec<Artifact>, bool)> {
    let budget = match a.budget {
        Some(s) if !(s >= 0.0 && s.is_finite()) => return Err(CliError::Usage("--budget must be a nonnegative number".into())),
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    let ids = (!a.criteria.is_empty()).then_some(a.criteria.as_slice());
    let report = verify::run(a.suite, ids, a.rng, budget)?;
    for c in &report.criteria {
        eprintln!("{} criterion {:>2} {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name);
    }
    if !report.complete {
        eprintln!("budget exhausted: report is incomplete");
    }
    let passed = report.complete && report.all_passed();
    let data = serde_json::to_value(&report).expect("report serializes");
    Ok((vec![h.json("report.json", data)], passed))
}
