//! Python bindings for the cliffbog engine.
//!
//! Exact values cross the boundary as canonical strings (`"3/5"`, `"1+2i"`,
//! `"e0e1"`), so no precision is lost to floats. The module exposes the two
//! central types — `Multivector` and `FinitaryMap` — plus the top-level
//! decision procedures `decide`, `witness`, `centralizer`,
//! `tensor_split_check`, and `selftest`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cliffbog::bogolyubov::BogolyubovAction;
use cliffbog::clifford::{Algebra, Multivector, Parity};
use cliffbog::error::Error;
use cliffbog::finitary::{FinitaryOrthogonal, Sign};
use cliffbog::linalg::Matrix;
use cliffbog::scalar::Scalar;
use cliffbog::{innerness, selftest};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_block(block: Vec<Vec<String>>) -> PyResult<Matrix> {
    let rows = block
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|entry| entry.parse::<Scalar>().map_err(to_py_err))
                .collect::<PyResult<Vec<Scalar>>>()
        })
        .collect::<PyResult<Vec<Vec<Scalar>>>>()?;
    Matrix::from_rows(rows).map_err(to_py_err)
}

fn parse_map(block: Vec<Vec<String>>, tail: &str) -> PyResult<FinitaryOrthogonal> {
    let tail: Sign = tail.parse().map_err(to_py_err)?;
    FinitaryOrthogonal::new(parse_block(block)?, tail).map_err(to_py_err)
}

/// Same default as the CLI: the even-rounded block size plus two spare
/// generators.
fn default_truncation(m: usize) -> usize {
    m + m % 2 + 2
}

/// An element of the Clifford algebra Cl(V_n) over ℚ(i), truncated to the
/// first `n` generators e0..e{n-1}.
#[pyclass(name = "Multivector")]
struct PyMultivector {
    inner: Multivector,
}

impl PyMultivector {
    fn algebra(&self) -> PyResult<Algebra> {
        Algebra::orthonormal(self.inner.n()).map_err(to_py_err)
    }

    /// Extend both operands to a common generator window.
    fn aligned(&self, other: &Self) -> PyResult<(Multivector, Multivector, Algebra)> {
        let n = self.inner.n().max(other.inner.n());
        let a = self.inner.extend_to(n).map_err(to_py_err)?;
        let b = other.inner.extend_to(n).map_err(to_py_err)?;
        Ok((a, b, Algebra::orthonormal(n).map_err(to_py_err)?))
    }
}

#[pymethods]
impl PyMultivector {
    /// Parse a multivector such as `"1 - e0e1"` or `"3/5 + 2i*e2"` in Cl(V_n).
    #[new]
    fn new(n: usize, text: &str) -> PyResult<Self> {
        Ok(PyMultivector {
            inner: Multivector::parse(n, text).map_err(to_py_err)?,
        })
    }

    /// Number of generators of the ambient truncation.
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Number of nonzero blade terms.
    fn num_terms(&self) -> usize {
        self.inner.num_terms()
    }

    /// "even", "odd", or None when the element is not homogeneous.
    fn parity(&self) -> Option<&'static str> {
        self.inner.parity().map(|p| match p {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// The same element viewed in a larger truncation Cl(V_m), m >= n.
    fn extend_to(&self, m: usize) -> PyResult<Self> {
        Ok(PyMultivector {
            inner: self.inner.extend_to(m).map_err(to_py_err)?,
        })
    }

    /// Multiplicative inverse; raises ValueError for non-invertible elements.
    fn inverse(&self) -> PyResult<Self> {
        Ok(PyMultivector {
            inner: self.algebra()?.inverse(&self.inner).map_err(to_py_err)?,
        })
    }

    /// Scale by an exact scalar given as a string, e.g. `"-2/3"` or `"i"`.
    fn scale(&self, s: &str) -> PyResult<Self> {
        let s: Scalar = s.parse().map_err(to_py_err)?;
        Ok(PyMultivector {
            inner: self.inner.scale(&s),
        })
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        let (a, b, algebra) = self.aligned(other)?;
        Ok(PyMultivector {
            inner: algebra.mul(&a, &b).map_err(to_py_err)?,
        })
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        let (a, b, _) = self.aligned(other)?;
        Ok(PyMultivector { inner: &a + &b })
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        let (a, b, _) = self.aligned(other)?;
        Ok(PyMultivector { inner: &a - &b })
    }

    fn __neg__(&self) -> Self {
        PyMultivector {
            inner: -&self.inner,
        }
    }

    fn __eq__(&self, other: &Self) -> PyResult<bool> {
        let (a, b, _) = self.aligned(other)?;
        Ok(a == b)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Multivector({}, \"{}\")", self.inner.n(), self.inner)
    }
}

/// A finitary orthogonal transformation: an m×m orthogonal block on the first
/// m coordinates plus a global ±1 tail on all remaining ones.
#[pyclass(name = "FinitaryMap")]
struct PyFinitaryMap {
    inner: FinitaryOrthogonal,
}

#[pymethods]
impl PyFinitaryMap {
    /// Build from a block of exact scalar strings and a tail sign "+1"/"-1".
    /// Raises ValueError unless the block is orthogonal for the standard form.
    #[new]
    fn new(block: Vec<Vec<String>>, tail: &str) -> PyResult<Self> {
        Ok(PyFinitaryMap {
            inner: parse_map(block, tail)?,
        })
    }

    /// Block size m.
    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    /// Tail sign as "+1" or "-1".
    #[getter]
    fn tail(&self) -> &'static str {
        self.inner.tail().as_str()
    }

    /// The block as strings, row by row.
    fn block(&self) -> Vec<Vec<String>> {
        self.inner
            .block()
            .rows()
            .map(|r| r.iter().map(Scalar::to_string).collect())
            .collect()
    }

    /// Apply to a coordinate vector (length >= m); exact strings in and out.
    fn apply(&self, v: Vec<String>) -> PyResult<Vec<String>> {
        let coords = v
            .into_iter()
            .map(|s| s.parse::<Scalar>().map_err(to_py_err))
            .collect::<PyResult<Vec<Scalar>>>()?;
        let image = self.inner.apply_vec(&coords).map_err(to_py_err)?;
        Ok(image.iter().map(Scalar::to_string).collect())
    }

    /// The inverse transformation (transpose block, same tail).
    fn inverse(&self) -> Self {
        PyFinitaryMap {
            inner: self.inner.inverse(),
        }
    }

    /// Composition self ∘ other.
    fn compose(&self, other: &Self) -> PyResult<Self> {
        Ok(PyFinitaryMap {
            inner: self.inner.compose(&other.inner).map_err(to_py_err)?,
        })
    }

    /// The induced Bogolyubov automorphism applied to a multivector.
    fn act(&self, a: &PyMultivector) -> PyResult<PyMultivector> {
        let action =
            BogolyubovAction::new(self.inner.clone(), a.inner.n()).map_err(to_py_err)?;
        Ok(PyMultivector {
            inner: action.apply(&a.inner).map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("FinitaryMap(block={:?}, tail=\"{}\")", self.block(), self.tail())
    }
}

/// Decide innerness of the Bogolyubov automorphism induced by (block, tail).
/// Returns a dict with keys inner, branch, k, quotient_det, witness,
/// routes_agree — the same fields as the CLI's JSON output.
#[pyfunction]
#[pyo3(signature = (block, tail, n=None))]
fn decide(py: Python<'_>, block: Vec<Vec<String>>, tail: &str, n: Option<usize>) -> PyResult<Py<PyDict>> {
    let map = parse_map(block, tail)?;
    let n = n.unwrap_or_else(|| default_truncation(map.m()));
    let verdict = innerness::decide(&map, n).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("inner", verdict.inner)?;
    out.set_item("branch", verdict.branch.as_str())?;
    out.set_item("k", verdict.k)?;
    out.set_item("quotient_det", verdict.quotient_det.as_ref().map(Scalar::to_string))?;
    out.set_item(
        "witness",
        verdict.witness.as_ref().map(Multivector::to_string),
    )?;
    out.set_item("routes_agree", verdict.routes_agree)?;
    Ok(out.into())
}

/// Solve for a conjugating witness in Cl(V_n); None when the automorphism is
/// not inner.
#[pyfunction]
#[pyo3(signature = (block, tail, n=None))]
fn witness(block: Vec<Vec<String>>, tail: &str, n: Option<usize>) -> PyResult<Option<PyMultivector>> {
    let map = parse_map(block, tail)?;
    let n = n.unwrap_or_else(|| default_truncation(map.m()));
    Ok(innerness::solve_witness(&map, n)
        .map_err(to_py_err)?
        .map(|inner| PyMultivector { inner }))
}

/// Basis of the centralizer of Cl(U_k) inside Cl(V_n), k even.
#[pyfunction]
fn centralizer(n: usize, k: usize) -> PyResult<Vec<PyMultivector>> {
    Ok(innerness::centralizer(n, k)
        .map_err(to_py_err)?
        .basis
        .into_iter()
        .map(|inner| PyMultivector { inner })
        .collect())
}

/// Verify the linear tensor factorization Cl(V_n) ≅ Cl(U_k) ⊗ Z(Cl(U_k)).
#[pyfunction]
fn tensor_split_check(n: usize, k: usize) -> PyResult<bool> {
    innerness::tensor_split_check(n, k).map_err(to_py_err)
}

/// Run the built-in law suites; returns (cases, failures).
#[pyfunction]
fn run_selftest() -> (usize, usize) {
    let reports = selftest::run_all();
    let cases = reports.iter().map(|r| r.cases).sum();
    let failures = reports.iter().map(|r| r.failures).sum();
    (cases, failures)
}

#[pymodule]
fn cliffbog_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMultivector>()?;
    m.add_class::<PyFinitaryMap>()?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(centralizer, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_split_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    m.add("MAX_GENERATORS", cliffbog::MAX_GENERATORS)?;
    Ok(())
}
