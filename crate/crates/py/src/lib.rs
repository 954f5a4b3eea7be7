//! Python bindings for `spinform`.
//!
//! States are passed as lists of complex amplitudes, operators and bases as
//! lists of rows. Library errors surface as `ValueError`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use spinform::bases::{self, BasisSet};
use spinform::entanglement;
use spinform::groups;
use spinform::spinflip;
use spinform::tensor_core::{self, CMatrix, GlobalOperator, PureState};

fn py_err(e: spinform::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn state(amps: Vec<Complex64>) -> PyResult<PureState> {
    PureState::from_amplitudes(amps).map_err(py_err)
}

fn rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
    Ok(CMatrix::from_row_slice(dim, dim, &flat))
}

fn basis_vectors(b: &BasisSet) -> Vec<Vec<Complex64>> {
    b.vectors()
        .iter()
        .map(|v| v.amplitudes().to_vec())
        .collect()
}

/// Numerical tolerances shared by every check.
#[pyclass(name = "Tolerances", frozen)]
struct PyTolerances {
    inner: tensor_core::Tolerances,
}

#[pymethods]
impl PyTolerances {
    #[new]
    #[pyo3(signature = (tol_norm=1e-12, tol_gram=1e-10, tol_residual=1e-8))]
    fn new(tol_norm: f64, tol_gram: f64, tol_residual: f64) -> PyResult<Self> {
        let inner =
            tensor_core::Tolerances::new(tol_norm, tol_gram, tol_residual).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn tol_norm(&self) -> f64 {
        self.inner.tol_norm
    }

    #[getter]
    fn tol_gram(&self) -> f64 {
        self.inner.tol_gram
    }

    #[getter]
    fn tol_residual(&self) -> f64 {
        self.inner.tol_residual
    }

    fn __repr__(&self) -> String {
        format!(
            "Tolerances(tol_norm={:e}, tol_gram={:e}, tol_residual={:e})",
            self.inner.tol_norm, self.inner.tol_gram, self.inner.tol_residual
        )
    }
}

fn tol(t: Option<PyRef<'_, PyTolerances>>) -> tensor_core::Tolerances {
    t.map(|t| t.inner).unwrap_or_default()
}

/// An n-qubit state vector.
#[pyclass(name = "State", frozen)]
struct PyState {
    inner: PureState,
}

#[pymethods]
impl PyState {
    #[new]
    fn new(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self {
            inner: state(amplitudes)?,
        })
    }

    #[staticmethod]
    fn random(n: usize, seed: u64) -> PyResult<Self> {
        Ok(Self {
            inner: tensor_core::random_state(n, seed).map_err(py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn flip(&self) -> Self {
        Self {
            inner: spinflip::flip_state(&self.inner),
        }
    }

    fn form(&self, other: PyRef<'_, PyState>) -> PyResult<Complex64> {
        Ok(spinflip::bilinear_form(&self.inner, &other.inner)
            .map_err(py_err)?
            .value)
    }

    fn tangle(&self) -> f64 {
        entanglement::tangle(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        format!("State(n={})", self.inner.n())
    }
}

#[pyfunction]
fn flip_state(amplitudes: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    Ok(spinflip::flip_state(&state(amplitudes)?).into_amplitudes())
}

#[pyfunction]
fn bilinear_form(psi: Vec<Complex64>, phi: Vec<Complex64>) -> PyResult<Complex64> {
    let f = spinflip::bilinear_form(&state(psi)?, &state(phi)?).map_err(py_err)?;
    Ok(f.value)
}

#[pyfunction]
fn flip_operator(m: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
    let op = GlobalOperator::from_matrix(matrix(m)?).map_err(py_err)?;
    Ok(rows(spinflip::flip_operator(&op).map_err(py_err)?.matrix()))
}

#[pyfunction]
fn tangle(amplitudes: Vec<Complex64>) -> PyResult<f64> {
    Ok(entanglement::tangle(&state(amplitudes)?))
}

#[pyfunction]
fn concurrence(amplitudes: Vec<Complex64>) -> PyResult<f64> {
    entanglement::concurrence_2q(&state(amplitudes)?).map_err(py_err)
}

#[pyfunction]
fn random_state(n: usize, seed: u64) -> PyResult<Vec<Complex64>> {
    Ok(tensor_core::random_state(n, seed)
        .map_err(py_err)?
        .into_amplitudes())
}

#[pyfunction]
fn magic_basis(n: usize) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(basis_vectors(&bases::magic_basis(n).map_err(py_err)?))
}

#[pyfunction]
fn product_basis(n: usize) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(basis_vectors(
        &bases::product_biortho_basis(n).map_err(py_err)?,
    ))
}

/// Returns `(passed, hilbert_residual, form_residual)`.
#[pyfunction]
#[pyo3(signature = (vectors, tolerances=None))]
fn check_biorthonormal(
    vectors: Vec<Vec<Complex64>>,
    tolerances: Option<PyRef<'_, PyTolerances>>,
) -> PyResult<(bool, f64, f64)> {
    let vectors = vectors
        .into_iter()
        .map(state)
        .collect::<PyResult<Vec<_>>>()?;
    let n = vectors.first().map(|v| v.n()).unwrap_or(0);
    let basis = BasisSet::new(n, vectors, "user").map_err(py_err)?;
    let v = bases::check_biorthonormal(&basis, &tol(tolerances)).verdict;
    Ok((v.passed, v.hilbert_residual, v.form_residual))
}

/// Returns `(passed, residual)` for `‖flip(M)† M - I‖`.
#[pyfunction]
#[pyo3(signature = (m, tolerances=None))]
fn is_form_preserving(
    m: Vec<Vec<Complex64>>,
    tolerances: Option<PyRef<'_, PyTolerances>>,
) -> PyResult<(bool, f64)> {
    let op = GlobalOperator::from_matrix(matrix(m)?).map_err(py_err)?;
    let c = groups::is_form_preserving(&op, &tol(tolerances)).map_err(py_err)?;
    Ok((c.passed, c.residual))
}

#[pyfunction]
#[pyo3(signature = (amplitudes, tolerances=None))]
fn is_maximally_entangled(
    amplitudes: Vec<Complex64>,
    tolerances: Option<PyRef<'_, PyTolerances>>,
) -> PyResult<bool> {
    let r = entanglement::is_maximally_entangled(&state(amplitudes)?, &tol(tolerances))
        .map_err(py_err)?;
    Ok(r.maximal)
}

#[pyfunction]
#[pyo3(signature = (n, theta, nu, tolerances=None))]
fn maxent_generate(
    n: usize,
    theta: f64,
    nu: Vec<f64>,
    tolerances: Option<PyRef<'_, PyTolerances>>,
) -> PyResult<Vec<Complex64>> {
    let psi = entanglement::maxent_generate(n, theta, &nu, &tol(tolerances)).map_err(py_err)?;
    Ok(psi.into_amplitudes())
}

#[pymodule]
fn pyspinform(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", spinform::VERSION)?;
    m.add_class::<PyTolerances>()?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(flip_state, m)?)?;
    m.add_function(wrap_pyfunction!(bilinear_form, m)?)?;
    m.add_function(wrap_pyfunction!(flip_operator, m)?)?;
    m.add_function(wrap_pyfunction!(tangle, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(random_state, m)?)?;
    m.add_function(wrap_pyfunction!(magic_basis, m)?)?;
    m.add_function(wrap_pyfunction!(product_basis, m)?)?;
    m.add_function(wrap_pyfunction!(check_biorthonormal, m)?)?;
    m.add_function(wrap_pyfunction!(is_form_preserving, m)?)?;
    m.add_function(wrap_pyfunction!(is_maximally_entangled, m)?)?;
    m.add_function(wrap_pyfunction!(maxent_generate, m)?)?;
    Ok(())
}
