//! Python bindings: the multigraph type plus the exact indices, the
//! coloring engine and a Tashkinov tree report.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use goldberg_lab::graph::Multigraph as CoreGraph;
use goldberg_lab::{colorer, fractional, oracle, tashkinov, VertexSet};

fn to_py_err(err: goldberg_lab::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// A loopless multigraph with first-class parallel edges.
#[pyclass(name = "Multigraph")]
#[derive(Clone)]
struct PyMultigraph {
    inner: CoreGraph,
}

#[pymethods]
impl PyMultigraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyMultigraph {
            inner: CoreGraph::new(n, edges).map_err(to_py_err)?,
        })
    }

    /// Parse the edge-list text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyMultigraph {
            inner: CoreGraph::parse(text).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMultigraph {
            inner: CoreGraph::from_json(text).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn shannon(mu: usize) -> PyResult<Self> {
        Ok(PyMultigraph {
            inner: CoreGraph::shannon(mu).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn ring(n: usize, mu: usize) -> PyResult<Self> {
        Ok(PyMultigraph {
            inner: CoreGraph::ring(n, mu).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn petersen() -> Self {
        PyMultigraph {
            inner: CoreGraph::petersen(),
        }
    }

    #[staticmethod]
    fn complete(n: usize, mu: usize) -> PyResult<Self> {
        Ok(PyMultigraph {
            inner: CoreGraph::complete(n, mu).map_err(to_py_err)?,
        })
    }

    /// Seeded random multigraph; identical output for identical inputs.
    #[staticmethod]
    fn random(n: usize, mu_max: usize, edge_prob: f64, seed: u64) -> PyResult<Self> {
        Ok(PyMultigraph {
            inner: CoreGraph::random(n, mu_max, edge_prob, seed).map_err(to_py_err)?,
        })
    }

    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    fn multiplicity(&self) -> usize {
        self.inner.multiplicity()
    }

    fn degree(&self, v: usize) -> usize {
        self.inner.degree(v)
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    /// Edge ids with exactly one end in the vertex set.
    fn boundary(&self, vertices: Vec<usize>) -> Vec<usize> {
        self.inner
            .boundary(&VertexSet::from_iter(vertices.into_iter()))
    }

    fn serialize(&self) -> String {
        self.inner.serialize()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Multigraph(n={}, m={}, max_degree={}, multiplicity={})",
            self.inner.vertex_count(),
            self.inner.edge_count(),
            self.inner.max_degree(),
            self.inner.multiplicity()
        )
    }
}

/// Exact chromatic index by backtracking search.
#[pyfunction]
fn chi_prime(g: &PyMultigraph) -> PyResult<u32> {
    oracle::chi_prime_exact(&g.inner).map_err(to_py_err)
}

/// Exact decision with a witness coloring in edge-id order.
#[pyfunction]
fn is_k_colorable(g: &PyMultigraph, k: u32) -> (bool, Option<Vec<u32>>) {
    oracle::is_k_colorable(&g.inner, k)
}

/// Exact fractional chromatic index: `(ratio_string, ceiling, witness)`.
#[pyfunction]
fn chi_f(g: &PyMultigraph) -> PyResult<(String, u32, Option<Vec<usize>>)> {
    let r = fractional::chi_f_exact(&g.inner).map_err(to_py_err)?;
    Ok((
        format!("{}/{}", r.chi_f.numer(), r.chi_f.denom()),
        r.ceil_chi_f,
        r.witness.map(|w| w.vertices),
    ))
}

/// `max(max_degree + 1, ceil(chi_f))`.
#[pyfunction]
fn goldberg_target(g: &PyMultigraph) -> PyResult<u32> {
    fractional::goldberg_target(&g.inner).map_err(to_py_err)
}

fn outcome_dict<'py>(
    py: Python<'py>,
    k: u32,
    out: &colorer::ColorOutcome,
) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("k", k)?;
    let verdict = match out.verdict {
        colorer::Verdict::Colored => "colored",
        colorer::Verdict::Certificate => "certificate",
        colorer::Verdict::BudgetExhausted => "budget_exhausted",
    };
    dict.set_item("verdict", verdict)?;
    dict.set_item("coloring", out.coloring.clone())?;
    match &out.certificate {
        Some(cert) => {
            dict.set_item("x", cert.vertices.clone())?;
            dict.set_item("density", cert.density)?;
        }
        None => {
            dict.set_item("x", py.None())?;
            dict.set_item("density", py.None())?;
        }
    }
    dict.set_item("steps", out.stats.steps)?;
    dict.set_item("flips", out.stats.flips)?;
    dict.set_item("ett_extensions", out.stats.ett_extensions)?;
    Ok(dict)
}

/// Color with a fixed number of colors: a dict with `verdict`,
/// `coloring` (edge-id order) or `x`/`density` for certificates.
#[pyfunction]
#[pyo3(signature = (g, k, seed = 0))]
fn color_with(py: Python<'_>, g: &PyMultigraph, k: u32, seed: u64) -> PyResult<Py<PyDict>> {
    let opts = colorer::ColorerOptions {
        seed,
        ..Default::default()
    };
    let out = colorer::color_with_opts(&g.inner, k, &opts).map_err(to_py_err)?;
    Ok(outcome_dict(py, k, &out)?.into())
}

/// Color with the automatic ladder; returns `(k_used, outcome_dict)`.
#[pyfunction]
#[pyo3(signature = (g, seed = 0))]
fn color_auto(py: Python<'_>, g: &PyMultigraph, seed: u64) -> PyResult<(u32, Py<PyDict>)> {
    let opts = colorer::ColorerOptions {
        seed,
        ..Default::default()
    };
    let (k, out) = colorer::color_auto_opts(&g.inner, &opts).map_err(to_py_err)?;
    Ok((k, outcome_dict(py, k, &out)?.into()))
}

/// Build a k-triple and grow a maximal Tashkinov tree; `None` when the
/// graph has no triple. The dict reports the tree-level facts.
#[pyfunction]
#[pyo3(signature = (g, seed = 0))]
fn tree_report(py: Python<'_>, g: &PyMultigraph, seed: u64) -> PyResult<Option<Py<PyDict>>> {
    let Some(triple) = oracle::make_k_triple(&g.inner, seed).map_err(to_py_err)? else {
        return Ok(None);
    };
    let tree = tashkinov::grow_maximal(&g.inner, &triple.coloring);
    let vs = tree.vertex_set();
    let dict = PyDict::new(py);
    dict.set_item("k", triple.k())?;
    dict.set_item("uncolored_edge", triple.edge)?;
    dict.set_item("tree_regime", triple.meets_tree_regime(&g.inner))?;
    dict.set_item("tree_vertices", vs.iter().collect::<Vec<_>>())?;
    dict.set_item("tree_size", tree.size())?;
    dict.set_item(
        "elementary",
        triple
            .coloring
            .is_elementary(&g.inner, &vs)
            .map_err(to_py_err)?,
    )?;
    dict.set_item(
        "strongly_closed",
        triple
            .coloring
            .is_strongly_closed(&g.inner, &vs)
            .map_err(to_py_err)?,
    )?;
    dict.set_item(
        "free_colors",
        tree.free_colors(&triple.coloring).iter().collect::<Vec<_>>(),
    )?;
    dict.set_item(
        "defective_colors",
        tree.defective_colors(&g.inner, &triple.coloring)
            .iter()
            .collect::<Vec<_>>(),
    )?;
    Ok(Some(dict.into()))
}

#[pymodule]
fn goldberg_lab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMultigraph>()?;
    m.add_function(wrap_pyfunction!(chi_prime, m)?)?;
    m.add_function(wrap_pyfunction!(is_k_colorable, m)?)?;
    m.add_function(wrap_pyfunction!(chi_f, m)?)?;
    m.add_function(wrap_pyfunction!(goldberg_target, m)?)?;
    m.add_function(wrap_pyfunction!(color_with, m)?)?;
    m.add_function(wrap_pyfunction!(color_auto, m)?)?;
    m.add_function(wrap_pyfunction!(tree_report, m)?)?;
    Ok(())
}
