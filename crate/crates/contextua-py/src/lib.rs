//! Python bindings for the contextua core: exact scalars, subspaces, truth
//! valuation, determinate-sublattice construction, and colorability search.
//!
//! Exact values cross the boundary as canonical strings (`"1/2"`, `"r2"`,
//! `"-i"`, ...) so no precision is lost; bulk reports come back as plain
//! Python structures.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use contextua::bubclifton as bc;
use contextua::exactlin::{Scalar, Vect};
use contextua::kscheck;
use contextua::lattice;
use contextua::valuation;
use contextua::{datasets, Error};

fn to_py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_scalar(text: &str) -> PyResult<Scalar> {
    text.parse::<Scalar>().map_err(to_py_err)
}

fn parse_vect(entries: Vec<String>) -> PyResult<Vect> {
    let refs: Vec<&str> = entries.iter().map(|s| s.as_str()).collect();
    Vect::parse(&refs).map_err(to_py_err)
}

fn vect_strings(v: &Vect) -> Vec<String> {
    v.entries().iter().map(|s| s.to_string()).collect()
}

/// An exact number a + b*sqrt(2) + c*i + d*i*sqrt(2) with rational a, b, c, d.
#[pyclass(name = "Scalar", frozen)]
#[derive(Clone)]
struct PyScalar {
    inner: Scalar,
}

#[pymethods]
impl PyScalar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_scalar(text)? })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Scalar({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __add__(&self, other: &Self) -> Self {
        Self { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self { inner: &self.inner - &other.inner }
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self { inner: &self.inner * &other.inner }
    }

    fn __truediv__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.div(&other.inner).map_err(to_py_err)? })
    }

    fn __neg__(&self) -> Self {
        Self { inner: -&self.inner }
    }

    /// Complex conjugate.
    fn conj(&self) -> Self {
        Self { inner: self.inner.conj() }
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }
}

/// A subspace of an n-dimensional space, stored in canonical form so equal
/// subspaces compare equal whatever basis produced them.
#[pyclass(name = "Subspace", frozen)]
#[derive(Clone)]
struct PySubspace {
    inner: lattice::Subspace,
}

#[pymethods]
impl PySubspace {
    #[new]
    fn new(dim: usize, basis: Vec<Vec<String>>) -> PyResult<Self> {
        let vectors = basis
            .into_iter()
            .map(parse_vect)
            .collect::<PyResult<Vec<Vect>>>()?;
        Ok(Self {
            inner: lattice::Subspace::span(dim, &vectors).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn zero(dim: usize) -> PyResult<Self> {
        contextua::exactlin::check_dim(dim).map_err(to_py_err)?;
        Ok(Self { inner: lattice::Subspace::zero(dim) })
    }

    #[staticmethod]
    fn full(dim: usize) -> PyResult<Self> {
        contextua::exactlin::check_dim(dim).map_err(to_py_err)?;
        Ok(Self { inner: lattice::Subspace::full(dim) })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    /// Canonical basis as rows of exact-value strings.
    fn basis(&self) -> Vec<Vec<String>> {
        self.inner.basis_vectors().iter().map(vect_strings).collect()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Subspace(dim={}, rank={})", self.inner.dim(), self.inner.rank())
    }

    /// Containment: does this subspace lie inside `other`?
    fn leq(&self, other: &Self) -> PyResult<bool> {
        self.inner.leq(&other.inner).map_err(to_py_err)
    }

    fn meet(&self, other: &Self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.meet(&other.inner).map_err(to_py_err)? })
    }

    fn join(&self, other: &Self) -> PyResult<Self> {
        Ok(Self { inner: self.inner.join(&other.inner).map_err(to_py_err)? })
    }

    /// Orthogonal complement.
    fn ortho(&self) -> Self {
        Self { inner: self.inner.ortho() }
    }
}

/// A pure state given by a nonzero vector (normalization is never needed).
#[pyclass(name = "State", frozen)]
#[derive(Clone)]
struct PyState {
    inner: valuation::State,
}

#[pymethods]
impl PyState {
    #[new]
    fn new(vector: Vec<String>) -> PyResult<Self> {
        let v = parse_vect(vector)?;
        Ok(Self { inner: valuation::State::new(&v).map_err(to_py_err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn vector(&self) -> Vec<String> {
        vect_strings(&self.inner.vector())
    }

    fn __repr__(&self) -> String {
        format!("State({:?})", self.vector())
    }

    /// Three-valued verdict on a proposition: "true", "false", or
    /// "indeterminate".
    fn truth_value(&self, prop: &PySubspace) -> PyResult<&'static str> {
        Ok(valuation::classify(&self.inner, &prop.inner)
            .map_err(to_py_err)?
            .as_str())
    }

    /// Exact outcome probability for a proposition, as a canonical string.
    fn probability(&self, prop: &PySubspace) -> PyResult<String> {
        Ok(valuation::born_probability(&self.inner, &prop.inner)
            .map_err(to_py_err)?
            .to_string())
    }
}

/// An observable as a list of (eigenvalue, eigenspace) pairs.
#[pyclass(name = "Observable", frozen)]
#[derive(Clone)]
struct PyObservable {
    inner: bc::Observable,
}

#[pymethods]
impl PyObservable {
    #[new]
    fn new(dim: usize, spectral: Vec<(String, PySubspace)>) -> PyResult<Self> {
        let pairs = spectral
            .into_iter()
            .map(|(ev, space)| Ok((parse_scalar(&ev)?, space.inner)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: bc::Observable::new(dim, pairs).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn identity(dim: usize) -> PyResult<Self> {
        contextua::exactlin::check_dim(dim).map_err(to_py_err)?;
        Ok(Self { inner: bc::Observable::identity(dim) })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// The spectral decomposition as (eigenvalue string, eigenspace) pairs.
    fn spectral(&self) -> Vec<(String, PySubspace)> {
        self.inner
            .spectral()
            .iter()
            .map(|(ev, space)| (ev.to_string(), PySubspace { inner: space.clone() }))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Observable(dim={}, eigenvalues={:?})",
            self.inner.dim(),
            self.inner
                .spectral()
                .iter()
                .map(|(ev, _)| ev.to_string())
                .collect::<Vec<_>>()
        )
    }
}

/// A measurement context: a state paired with an observable.
#[pyclass(name = "Context", frozen)]
#[derive(Clone)]
struct PyContext {
    inner: bc::Context,
}

#[pymethods]
impl PyContext {
    #[new]
    fn new(state: PyState, observable: PyObservable) -> PyResult<Self> {
        Ok(Self {
            inner: bc::Context::new(state.inner, observable.inner).map_err(to_py_err)?,
        })
    }

    /// The determinate sublattice this context induces.
    fn project(&self) -> PyDeterminateSublattice {
        PyDeterminateSublattice { inner: self.inner.project() }
    }

    fn __repr__(&self) -> String {
        format!("Context(dim={})", self.inner.state().dim())
    }
}

/// The propositions a context renders determinately true or false, generated
/// by k pairwise-orthogonal rays with exact weights summing to one.
#[pyclass(name = "DeterminateSublattice", frozen)]
struct PyDeterminateSublattice {
    inner: bc::DeterminateSublattice,
}

#[pymethods]
impl PyDeterminateSublattice {
    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    /// Generating rays as vectors of exact-value strings.
    fn rays(&self) -> Vec<Vec<String>> {
        self.inner
            .rays()
            .iter()
            .map(|r| vect_strings(&r.vector()))
            .collect()
    }

    /// Exact weights, parallel to `rays()`.
    fn weights(&self) -> Vec<String> {
        self.inner.weights().iter().map(|w| w.to_string()).collect()
    }

    fn is_member(&self, prop: &PySubspace) -> PyResult<bool> {
        self.inner.is_member(&prop.inner).map_err(to_py_err)
    }

    /// Value the i-th two-valued homomorphism gives a member proposition.
    fn evaluate(&self, index: usize, prop: &PySubspace) -> PyResult<bool> {
        self.inner
            .homomorphism(index)
            .map_err(to_py_err)?
            .evaluate(&prop.inner)
            .map_err(to_py_err)
    }

    /// The contextual state as (weight, projector-rows) pairs.
    fn contextual_state(&self) -> Vec<(String, Vec<Vec<String>>)> {
        self.inner
            .contextual_state()
            .mixture()
            .iter()
            .map(|(w, p)| {
                let rows = (0..p.rows())
                    .map(|r| (0..p.cols()).map(|c| p.get(r, c).to_string()).collect())
                    .collect();
                (w.to_string(), rows)
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("DeterminateSublattice(k={})", self.inner.k())
    }
}

/// Names of the embedded datasets.
#[pyfunction]
fn dataset_names() -> Vec<&'static str> {
    datasets::names()
}

/// The state sublattice a bare state induces (identity observable).
#[pyfunction]
fn state_sublattice(state: &PyState) -> PyDeterminateSublattice {
    PyDeterminateSublattice { inner: bc::dvn_sublattice(&state.inner) }
}

fn rayset_for(name: &str) -> PyResult<kscheck::RaySet> {
    match datasets::get(name).map_err(to_py_err)?.payload {
        datasets::DatasetPayload::RaySet(rs) => Ok(rs),
        _ => Err(PyValueError::new_err(format!(
            "dataset {name} is not a ray set"
        ))),
    }
}

/// Runs the colorability search on an embedded ray-set dataset and returns a
/// dict with the verdict, counts, and certificate flag.
#[pyfunction]
fn ks_report<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyDict>> {
    let rays = rayset_for(name)?;
    let problem = kscheck::build_problem(&rays);
    let report = kscheck::solve(&problem);
    let out = PyDict::new(py);
    out.set_item("rays", problem.rays.labels().len())?;
    out.set_item("edges", problem.edges.len())?;
    out.set_item("bases", problem.bases.len())?;
    out.set_item("verdict", if report.satisfiable { "sat" } else { "unsat" })?;
    out.set_item("nodes_explored", report.nodes_explored)?;
    out.set_item(
        "parity_certificate",
        kscheck::check_parity_certificate(&problem),
    )?;
    match report.coloring {
        Some(bits) => {
            let coloring = PyDict::new(py);
            for (label, bit) in problem.rays.labels().iter().zip(&bits) {
                coloring.set_item(label, *bit)?;
            }
            out.set_item("coloring", coloring)?;
        }
        None => out.set_item("coloring", py.None())?,
    }
    Ok(out)
}

/// Runs the colorability search on caller-supplied labelled rays.
#[pyfunction]
fn ks_solve_rays<'py>(
    py: Python<'py>,
    dim: usize,
    rays: Vec<(String, Vec<String>)>,
) -> PyResult<Bound<'py, PyDict>> {
    let entries = rays
        .into_iter()
        .map(|(label, coords)| Ok((label, parse_vect(coords)?)))
        .collect::<PyResult<Vec<_>>>()?;
    let rayset = kscheck::RaySet::new(dim, entries).map_err(to_py_err)?;
    let problem = kscheck::build_problem(&rayset);
    let report = kscheck::solve(&problem);
    let out = PyDict::new(py);
    out.set_item("edges", problem.edges.len())?;
    out.set_item("bases", problem.bases.len())?;
    out.set_item("verdict", if report.satisfiable { "sat" } else { "unsat" })?;
    match report.coloring {
        Some(bits) => {
            let list = PyList::new(py, bits.iter().map(|b| *b as u8))?;
            out.set_item("coloring", list)?;
        }
        None => out.set_item("coloring", py.None())?,
    }
    Ok(out)
}

#[pymodule]
fn contextua_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_class::<PySubspace>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PyObservable>()?;
    m.add_class::<PyContext>()?;
    m.add_class::<PyDeterminateSublattice>()?;
    m.add_function(wrap_pyfunction!(dataset_names, m)?)?;
    m.add_function(wrap_pyfunction!(state_sublattice, m)?)?;
    m.add_function(wrap_pyfunction!(ks_report, m)?)?;
    m.add_function(wrap_pyfunction!(ks_solve_rays, m)?)?;
    Ok(())
}
