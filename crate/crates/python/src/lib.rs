//! Python bindings for `bsrinf`.

use std::sync::Arc;

use bsrinf::abelian::DEFAULT_AUT_CAP;
use bsrinf::degree::{self as deg, DegreeMethod};
use bsrinf::gcgroup;
use bsrinf::twisted::{self, ReidemeisterNumber, Sign};
use bsrinf::Error;
use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

pyo3::create_exception!(bsrinf, BoundExceeded, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BoundExceeded { .. } => BoundExceeded::new_err(e.to_string()),
        Error::Inconsistency(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Converts a serializable value into plain Python objects via JSON.
fn to_object<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// Finite counts become ints, infinite ones `math.inf`.
fn reidemeister_to_py(py: Python<'_>, r: ReidemeisterNumber) -> PyResult<Py<PyAny>> {
    match r {
        ReidemeisterNumber::Finite(v) => Ok(v.into_pyobject(py)?.into_any().unbind()),
        ReidemeisterNumber::Infinite => Ok(f64::INFINITY.into_pyobject(py)?.into_any().unbind()),
    }
}

fn parse_method(method: &str) -> PyResult<DegreeMethod> {
    match method {
        "closed" | "closed_form" => Ok(DegreeMethod::ClosedForm),
        "search" => Ok(DegreeMethod::Search),
        "both" => Ok(DegreeMethod::Both),
        other => Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
}

/// Parameters of `BS(m, n)` in canonical form `0 < m <= |n|`.
#[pyclass(frozen, skip_from_py_object, module = "bsrinf")]
#[derive(Clone)]
struct BsParams {
    inner: gcgroup::BsParams,
}

#[pymethods]
impl BsParams {
    #[new]
    fn new(m: i64, n: i64) -> PyResult<Self> {
        Ok(Self { inner: gcgroup::BsParams::new(m, n).map_err(to_py)? })
    }

    #[getter]
    fn m(&self) -> i64 {
        self.inner.m
    }

    #[getter]
    fn n(&self) -> i64 {
        self.inner.n
    }

    #[getter]
    fn d(&self) -> i64 {
        self.inner.d
    }

    #[getter]
    fn canonicalized(&self) -> bool {
        self.inner.canonicalized
    }

    fn is_coprime(&self) -> bool {
        self.inner.is_coprime()
    }

    fn __repr__(&self) -> String {
        format!("BsParams(m={}, n={})", self.inner.m, self.inner.n)
    }
}

/// The nilpotent quotient `G_c(m, n)`.
#[pyclass(frozen, module = "bsrinf")]
struct GcGroup {
    inner: Arc<gcgroup::GcGroup>,
}

#[pymethods]
impl GcGroup {
    #[new]
    fn new(m: i64, n: i64, c: usize) -> PyResult<Self> {
        let params = gcgroup::BsParams::new(m, n).map_err(to_py)?;
        Ok(Self { inner: Arc::new(gcgroup::GcGroup::build(params, c).map_err(to_py)?) })
    }

    #[getter]
    fn params(&self) -> BsParams {
        BsParams { inner: *self.inner.params() }
    }

    #[getter]
    fn class_bound(&self) -> usize {
        self.inner.class_bound()
    }

    #[getter]
    fn torsion_order(&self) -> BigInt {
        self.inner.torsion().order().clone()
    }

    #[getter]
    fn invariant_factors(&self) -> Vec<BigInt> {
        self.inner.torsion().invariant_factors().to_vec()
    }

    /// The scalar by which `psi` acts on the cyclic torsion subgroup, if cyclic.
    #[getter]
    fn nu(&self) -> Option<BigInt> {
        self.inner.nu().cloned()
    }

    /// Orders of the lower central series terms intersected with the torsion.
    fn gamma_orders(&self) -> PyResult<Vec<BigInt>> {
        let series = self.inner.lower_central_series().map_err(to_py)?;
        Ok(series.iter().map(|h| h.order().clone()).collect())
    }

    /// Returns `(has_rinf, method, witness_image_of_s)`.
    #[pyo3(signature = (aut_cap = DEFAULT_AUT_CAP))]
    fn has_rinf(&self, py: Python<'_>, aut_cap: u64) -> PyResult<(bool, Py<PyAny>, Option<Vec<BigInt>>)> {
        let v = py.detach(|| twisted::gc_has_rinf(&self.inner, aut_cap)).map_err(to_py)?;
        let witness = v.witness.map(|w| {
            let s = self.inner.s();
            w.action().apply(s).map(|x| x.coords().to_vec())
        });
        let witness = witness.transpose().map_err(to_py)?;
        Ok((v.has_rinf, to_object(py, &v.method)?, witness))
    }

    fn __repr__(&self) -> String {
        let p = self.inner.params();
        format!("GcGroup(m={}, n={}, c={})", p.m, p.n, self.inner.class_bound())
    }
}

/// An automorphism of `G_c(m, n)` given by its action on the torsion,
/// a translation part and the sign on `t`.
#[pyclass(frozen, module = "bsrinf")]
struct Automorphism {
    inner: twisted::GcAutomorphism,
}

#[pymethods]
impl Automorphism {
    /// Acts on the torsion by `mu`, maps `t` to `beta_multiple * s + t^eps`.
    #[staticmethod]
    #[pyo3(signature = (group, mu, beta_multiple = BigInt::from(0), eps = -1))]
    fn from_scalar(group: &GcGroup, mu: BigInt, beta_multiple: BigInt, eps: i64) -> PyResult<Self> {
        let sign = Sign::from_i64(eps).map_err(to_py)?;
        let inner =
            twisted::GcAutomorphism::from_scalar(group.inner.clone(), &mu, &beta_multiple, sign).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Reidemeister number by the closed formula.
    fn reidemeister(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let r = twisted::reidemeister_number(&self.inner).map_err(to_py)?;
        reidemeister_to_py(py, r)
    }

    /// Reidemeister number by explicit orbit counting on the torsion.
    #[pyo3(signature = (cap = 4096))]
    fn reidemeister_oracle(&self, py: Python<'_>, cap: u64) -> PyResult<Py<PyAny>> {
        let r = py.detach(|| twisted::reidemeister_oracle(&self.inner, cap)).map_err(to_py)?;
        reidemeister_to_py(py, r)
    }

    #[getter]
    fn epsilon(&self) -> i64 {
        self.inner.epsilon().value()
    }
}

/// Closed-form R-infinity nilpotency degree as a dict.
#[pyfunction]
fn closed_form_degree(py: Python<'_>, m: i64, n: i64) -> PyResult<Py<PyAny>> {
    let p = gcgroup::BsParams::new(m, n).map_err(to_py)?;
    to_object(py, &deg::closed_form_degree(&p))
}

/// Degree by `method` in `{"closed", "search", "both"}`.
#[pyfunction]
#[pyo3(signature = (m, n, method = "closed", c_max = deg::DEFAULT_QUERY_C_MAX, aut_cap = DEFAULT_AUT_CAP))]
fn degree(py: Python<'_>, m: i64, n: i64, method: &str, c_max: usize, aut_cap: u64) -> PyResult<Py<PyAny>> {
    let p = gcgroup::BsParams::new(m, n).map_err(to_py)?;
    let method = parse_method(method)?;
    let r = py.detach(|| deg::degree(&p, method, c_max, aut_cap)).map_err(to_py)?;
    to_object(py, &r)
}

/// Closed form and search for every canonical pair up to the bounds.
#[pyfunction]
#[pyo3(signature = (m_max, n_max, c_max = deg::DEFAULT_SWEEP_C_MAX, aut_cap = DEFAULT_AUT_CAP))]
fn sweep(py: Python<'_>, m_max: i64, n_max: i64, c_max: usize, aut_cap: u64) -> PyResult<Py<PyAny>> {
    let rows = py.detach(|| deg::sweep(m_max, n_max, c_max, aut_cap)).map_err(to_py)?;
    to_object(py, &rows)
}

/// Whether an orientation-reversing automorphism of `G_c(m, n)` with finite
/// Reidemeister number exists, for coprime `m`, `n`.
#[pyfunction]
fn anti_intertwiner_criterion(m: i64, n: i64, c: usize) -> PyResult<bool> {
    let p = gcgroup::BsParams::new(m, n).map_err(to_py)?;
    if !p.is_coprime() {
        return Err(PyValueError::new_err("criterion needs coprime parameters"));
    }
    Ok(twisted::anti_intertwiner_criterion(&p, c))
}

#[pymodule]
#[pyo3(name = "bsrinf")]
fn bsrinf_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<BsParams>()?;
    m.add_class::<GcGroup>()?;
    m.add_class::<Automorphism>()?;
    m.add_function(wrap_pyfunction!(closed_form_degree, m)?)?;
    m.add_function(wrap_pyfunction!(degree, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(anti_intertwiner_criterion, m)?)?;
    m.add("BoundExceeded", m.py().get_type::<BoundExceeded>())?;
    Ok(())
}
