//! Python bindings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use approx_core::construct::{construct as build, ConstructOptions};
use approx_core::hermite::{divided_difference as dd, hermite_interpolant as interpolant, hermite_residual as residual};
use approx_core::numcore;
use approx_core::poly::{dz59_sharpness as dz59, ChebPoly};
use approx_core::smoothness::{omega_k as modulus, FunctionModel};
use approx_core::verify::{measure as measure_ratio, EstimateKind, EstimateTag};
use approx_core::{Error, EvalGrid, Interval, NodeMultiset};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A node multiset, written `"z:m,z:m,..."`.
#[pyclass(name = "Nodes", frozen)]
struct PyNodes(NodeMultiset);

#[pymethods]
impl PyNodes {
    #[new]
    #[pyo3(signature = (spec = ""))]
    fn new(spec: &str) -> PyResult<Self> {
        NodeMultiset::parse(spec).map(PyNodes).map_err(py_err)
    }

    #[getter]
    fn distinct(&self) -> Vec<f64> {
        self.0.distinct().to_vec()
    }

    #[getter]
    fn multiplicities(&self) -> Vec<usize> {
        self.0.multiplicities().to_vec()
    }

    #[getter]
    fn flat(&self) -> Vec<f64> {
        self.0.flat().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.s()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Nodes('{}')", self.0)
    }
}

/// A built-in function by label: `exp`, `sin:a`, `abspow:g`, `pluspow:g`, `poly:c0,c1,...`.
#[pyclass(name = "Function", frozen)]
struct PyFunction(FunctionModel);

#[pymethods]
impl PyFunction {
    #[new]
    fn new(label: &str) -> PyResult<Self> {
        FunctionModel::from_label(label).map(PyFunction).map_err(py_err)
    }

    #[pyo3(signature = (x, nu = 0))]
    fn __call__(&self, x: f64, nu: usize) -> f64 {
        self.0.deriv(nu, x)
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    #[getter]
    fn r_max(&self) -> usize {
        self.0.r_max()
    }

    fn __repr__(&self) -> String {
        format!("Function('{}')", self.0.label())
    }
}

/// A Chebyshev series on `[-1, 1]`.
#[pyclass(name = "ChebPoly", frozen)]
struct PyChebPoly(ChebPoly);

#[pymethods]
impl PyChebPoly {
    #[new]
    fn new(coeffs: Vec<f64>) -> Self {
        PyChebPoly(ChebPoly::new(coeffs))
    }

    #[staticmethod]
    fn from_monomial(a: Vec<f64>) -> Self {
        PyChebPoly(ChebPoly::from_monomial(&a))
    }

    fn __call__(&self, x: f64) -> f64 {
        self.0.eval(x)
    }

    fn eval_many(&self, xs: Vec<f64>) -> Vec<f64> {
        self.0.eval_many(&xs)
    }

    #[pyo3(signature = (nu = 1))]
    fn derivative(&self, nu: usize) -> Self {
        PyChebPoly(self.0.nth_derivative(nu))
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.0.coeffs().to_vec()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn to_monomial(&self) -> Vec<f64> {
        self.0.to_monomial()
    }

    fn __repr__(&self) -> String {
        format!("ChebPoly(degree={})", self.0.degree())
    }
}

#[pyfunction]
fn divided_difference(f: &PyFunction, nodes: Vec<f64>) -> PyResult<f64> {
    dd(&f.0, &nodes).map_err(py_err)
}

#[pyfunction]
fn hermite_interpolant(f: &PyFunction, y: &PyNodes) -> PyResult<PyChebPoly> {
    interpolant(&f.0, &y.0).map(PyChebPoly).map_err(py_err)
}

/// Largest relative violation of the Hermite conditions of `f` on `y` by `p`.
#[pyfunction]
fn hermite_residual(f: &PyFunction, y: &PyNodes, p: &PyChebPoly) -> f64 {
    residual(&f.0, &y.0, &p.0).max_rel_err
}

/// The degree-`n` interpolating approximant, as a Chebyshev series.
#[pyfunction]
#[pyo3(signature = (f, y, k, r, n, mu = None))]
fn construct(py: Python<'_>, f: &PyFunction, y: &PyNodes, k: usize, r: usize, n: usize, mu: Option<usize>) -> PyResult<PyChebPoly> {
    let opts = ConstructOptions {
        mu,
        ..ConstructOptions::default()
    };
    let (f, y) = (&f.0, &y.0);
    py.detach(|| build(f, y, k, r, n, opts).and_then(|p| p.to_cheb()))
        .map(PyChebPoly)
        .map_err(py_err)
}

/// Summary of the pointwise ratio of one estimate, as a dict.
#[pyfunction]
#[pyo3(signature = (estimate, f, p, y, n, k, r, nu = None, ell = None, density = 64))]
#[allow(clippy::too_many_arguments)]
fn measure(
    py: Python<'_>,
    estimate: &str,
    f: &PyFunction,
    p: &PyChebPoly,
    y: &PyNodes,
    n: usize,
    k: usize,
    r: usize,
    nu: Option<usize>,
    ell: Option<usize>,
    density: usize,
) -> PyResult<Py<PyAny>> {
    let tag: EstimateTag = estimate.parse().map_err(py_err)?;
    let mut kind = EstimateKind::new(tag, k, r);
    if let Some(nu) = nu {
        kind = kind.with_nu(nu);
    }
    if let Some(ell) = ell {
        kind = kind.with_ell(ell);
    }
    let (fm, pp, yy) = (&f.0, &p.0, &y.0);
    let rep = py
        .detach(|| {
            let grid = EvalGrid::lobatto(fm.domain(), density * n)?;
            measure_ratio(&kind, fm, pp, yy, n, &grid)
        })
        .map_err(py_err)?;
    to_py(py, &rep.summary_json())
}

/// `rho_n(x) = sqrt(1 - x^2)/n + 1/n^2`.
#[pyfunction]
fn rho(n: usize, x: f64) -> PyResult<f64> {
    numcore::rho(n, x).map_err(py_err)
}

/// Grid estimate of `omega_k(f^{(r)}, t)` on the domain of `f`.
#[pyfunction]
#[pyo3(signature = (f, r, k, t, grid_points = 2001))]
fn omega_k(f: &PyFunction, r: usize, k: usize, t: f64, grid_points: usize) -> PyResult<f64> {
    let dom: Interval = f.0.domain();
    let grid = EvalGrid::uniform(dom, grid_points).map_err(py_err)?;
    modulus(&f.0, r, k, t, dom, &grid).map_err(py_err)
}

#[pyfunction]
fn dz59_sharpness(py: Python<'_>, n: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &dz59(n).map_err(py_err)?)
}

#[pymodule]
fn pointwise_approx(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNodes>()?;
    m.add_class::<PyFunction>()?;
    m.add_class::<PyChebPoly>()?;
    m.add_function(wrap_pyfunction!(divided_difference, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_interpolant, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_residual, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(omega_k, m)?)?;
    m.add_function(wrap_pyfunction!(dz59_sharpness, m)?)?;
    Ok(())
}
