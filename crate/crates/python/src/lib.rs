use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use prefattach::continuum::{line_breaking_cactus, sample_split_alpha};
use prefattach::gh_metric::{gh_exact_small, FiniteMetricSpace};
use prefattach::growth::{exact_step_distribution, grow_lpam};
use prefattach::looptree::{loop_planted, loop_tree, Looptree};
use prefattach::observables::{d_tau, martingale_table, martingale_value, tv_lower_bound, FloatTable};
use prefattach::rng::{from_seed, stream};
use prefattach::tree_core::{DecoratedTree, PlaneTree};
use prefattach::verify;

create_exception!(prefattach, GuardError, PyValueError);

fn err(e: prefattach::Error) -> PyErr {
    match e {
        prefattach::Error::Guard(_) => GuardError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A plane tree, optionally planted.
#[pyclass(name = "PlaneTree", frozen)]
struct PyPlaneTree(PlaneTree);

#[pymethods]
impl PyPlaneTree {
    #[new]
    #[pyo3(signature = (text, planted=false))]
    fn new(text: &str, planted: bool) -> PyResult<Self> {
        PlaneTree::parse(text, planted).map(Self).map_err(err)
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        Self(PlaneTree::path(n))
    }

    #[staticmethod]
    fn star(n: usize) -> Self {
        Self(PlaneTree::star(n))
    }

    #[staticmethod]
    fn planted_vertex() -> Self {
        Self(PlaneTree::planted_vertex())
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.0.num_vertices()
    }

    #[getter]
    fn planted(&self) -> bool {
        self.0.is_planted()
    }

    fn corner_count(&self) -> usize {
        self.0.corner_count()
    }

    fn degrees(&self) -> Vec<usize> {
        self.0.degrees()
    }

    /// Code shared by all trees with the same unrooted shape.
    fn canonical_code(&self) -> String {
        self.0.canonical_code().0
    }

    fn serialize(&self) -> String {
        self.0.serialize()
    }

    fn __repr__(&self) -> String {
        format!("PlaneTree({:?}, planted={})", self.0.serialize(), if self.0.is_planted() { "True" } else { "False" })
    }
}

#[pyfunction]
#[pyo3(signature = (seed, n, delta=0.0, rng=7))]
fn grow(seed: &PyPlaneTree, n: usize, delta: f64, rng: u64) -> PyResult<PyPlaneTree> {
    grow_lpam(&seed.0, n, delta, rng).map(|t| PyPlaneTree(t.final_state)).map_err(err)
}

/// Trajectory of the same run as `grow`, as JSON Lines.
#[pyfunction]
#[pyo3(signature = (seed, n, delta=0.0, rng=7))]
fn grow_trajectory(seed: &PyPlaneTree, n: usize, delta: f64, rng: u64) -> PyResult<String> {
    grow_lpam(&seed.0, n, delta, rng).map(|t| t.to_jsonl()).map_err(err)
}

/// Exact law of the shape after growing to `n` vertices, as `code -> "p/q"`.
#[pyfunction]
fn exact_law(seed: &PyPlaneTree, n: usize) -> PyResult<Vec<(String, String)>> {
    let dist = exact_step_distribution(&seed.0, n).map_err(err)?;
    Ok(dist.support.into_iter().map(|(k, p)| (k.0, p.to_string())).collect())
}

#[pyfunction]
#[pyo3(name = "d_tau")]
fn py_d_tau(tau: &str, tree: &PyPlaneTree) -> PyResult<u128> {
    let tau = DecoratedTree::parse(tau).map_err(err)?;
    Ok(d_tau(&tau, &tree.0.to_tree()))
}

#[pyfunction]
fn martingale(tau: &str, tree: &PyPlaneTree) -> PyResult<f64> {
    let tau = DecoratedTree::parse(tau).map_err(err)?;
    let t = tree.0.to_tree();
    let table: FloatTable = martingale_table(&tau, t.num_vertices()).map_err(err)?;
    martingale_value(&table, &t).map_err(err)
}

#[pyfunction]
#[pyo3(name = "tv_lower_bound")]
fn py_tv_lower_bound(mean1: f64, var1: f64, mean2: f64, var2: f64) -> PyResult<f64> {
    tv_lower_bound(mean1, var1, mean2, var2).map_err(err)
}

fn looptree_of(tree: &PlaneTree) -> PyResult<Looptree> {
    if tree.is_planted() { loop_planted(tree) } else { loop_tree(tree) }.map_err(err)
}

/// Edge list of the looptree; planted trees use the planted construction.
#[pyfunction]
fn looptree_edges(tree: &PyPlaneTree) -> PyResult<Vec<(usize, usize)>> {
    Ok(looptree_of(&tree.0)?.edges().to_vec())
}

#[pyfunction]
fn looptree_diameter(tree: &PyPlaneTree) -> PyResult<f64> {
    looptree_of(&tree.0)?.to_cactus().and_then(|c| c.diameter()).map_err(err)
}

fn space(rows: Vec<Vec<f64>>) -> PyResult<FiniteMetricSpace> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("distance table must be square"));
    }
    FiniteMetricSpace::from_table(n, rows.concat()).map_err(err)
}

/// Exact Gromov-Hausdorff distance between two small distance tables.
#[pyfunction]
fn gh_exact(x: Vec<Vec<f64>>, y: Vec<Vec<f64>>) -> PyResult<f64> {
    gh_exact_small(&space(x)?, &space(y)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (count, rng=7))]
fn split_alphas(count: usize, rng: u64) -> Vec<f64> {
    let mut r = from_seed(rng);
    (0..count).map(|_| sample_split_alpha(&mut r)).collect()
}

/// `(total_length, diameter)` of one discretized line-breaking sample.
#[pyfunction]
#[pyo3(signature = (k, rng=7, resolution=16.0, replicate=0))]
fn line_breaking(k: usize, rng: u64, resolution: f64, replicate: u64) -> PyResult<(f64, f64)> {
    let (chain, cactus) = line_breaking_cactus(k, &mut stream(rng, replicate), resolution).map_err(err)?;
    Ok((chain.total_length(), cactus.diameter().map_err(err)?))
}

/// Runs the selected acceptance criteria and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (criteria, seed=verify::DEFAULT_SEED))]
fn run_verify(py: Python<'_>, criteria: Vec<u32>, seed: u64) -> PyResult<String> {
    let report = py.detach(|| verify::run(None, Some(&criteria), seed, None)).map_err(err)?;
    Ok(report.to_json())
}

#[pymodule(name = "prefattach")]
fn py_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GuardError", m.py().get_type::<GuardError>())?;
    m.add_class::<PyPlaneTree>()?;
    m.add_function(wrap_pyfunction!(grow, m)?)?;
    m.add_function(wrap_pyfunction!(grow_trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(exact_law, m)?)?;
    m.add_function(wrap_pyfunction!(py_d_tau, m)?)?;
    m.add_function(wrap_pyfunction!(martingale, m)?)?;
    m.add_function(wrap_pyfunction!(py_tv_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(looptree_edges, m)?)?;
    m.add_function(wrap_pyfunction!(looptree_diameter, m)?)?;
    m.add_function(wrap_pyfunction!(gh_exact, m)?)?;
    m.add_function(wrap_pyfunction!(split_alphas, m)?)?;
    m.add_function(wrap_pyfunction!(line_breaking, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
