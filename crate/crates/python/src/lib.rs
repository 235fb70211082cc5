//! Python bindings. Matrices cross the boundary as `list[list[complex]]`,
//! vectors as `list[complex]`, and fields as `"real"` or `"complex"`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use orthosym_core::idempotents::FiniteRankIdempotent;
use orthosym_core::selftest::{run_all, SelftestConfig};
use orthosym_core::{
    self as core, Automorphism, Characterization, Functional, IndefiniteSpace, Matrix, RayMap,
    ScalarField, SemilinearOperator, TransformHandle, Vector,
};

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(name: &str) -> PyResult<ScalarField> {
    match name {
        "real" => Ok(ScalarField::Real),
        "complex" => Ok(ScalarField::Complex),
        other => Err(PyValueError::new_err(format!(
            "unknown field {other:?}, expected \"real\" or \"complex\""
        ))),
    }
}

fn field_name(f: ScalarField) -> &'static str {
    match f {
        ScalarField::Real => "real",
        ScalarField::Complex => "complex",
    }
}

fn to_matrix(rows: Vec<Vec<Complex64>>) -> PyResult<Matrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(Matrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn from_matrix(m: &Matrix) -> Vec<Vec<Complex64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// An invertible operator `x ↦ M·h(x)` with `h` the identity or conjugation.
#[pyclass(name = "Operator", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyOperator(SemilinearOperator);

#[pymethods]
impl PyOperator {
    #[new]
    #[pyo3(signature = (matrix, conj = false))]
    fn new(matrix: Vec<Vec<Complex64>>, conj: bool) -> PyResult<Self> {
        let auto = if conj {
            Automorphism::Conjugation
        } else {
            Automorphism::Identity
        };
        SemilinearOperator::new(to_matrix(matrix)?, auto)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        from_matrix(self.0.matrix())
    }

    #[getter]
    fn conj(&self) -> bool {
        self.0.auto() == Automorphism::Conjugation
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn apply(&self, x: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let y = self.0.apply(&Vector::from_slice(&x)).map_err(err)?;
        Ok(y.coords().iter().copied().collect())
    }

    /// The functional map `f ↦ f∘A`, as `(matrix, conj)`.
    fn adjoint(&self) -> (Vec<Vec<Complex64>>, bool) {
        let a = self.0.adjoint();
        (from_matrix(&a.matrix), a.auto == Automorphism::Conjugation)
    }

    fn inverse(&self) -> PyResult<Self> {
        self.0.inverse().map(Self).map_err(err)
    }

    fn compose(&self, other: &Self) -> PyResult<Self> {
        self.0.compose(&other.0).map(Self).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Operator(dim={}, conj={})", self.0.dim(), self.conj())
    }
}

/// The idempotent `x ⊗ f` normalized so that `<x, f> = 1`.
#[pyclass(name = "RankOne", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRankOne(core::RankOneIdempotent);

#[pymethods]
impl PyRankOne {
    #[new]
    fn new(x: Vec<Complex64>, f: Vec<Complex64>) -> PyResult<Self> {
        core::RankOneIdempotent::from_pair(Vector::from_slice(&x), Functional::from_slice(&f))
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn standard(n: usize, k: usize) -> Self {
        Self(core::RankOneIdempotent::standard(n, k))
    }

    #[getter]
    fn x(&self) -> Vec<Complex64> {
        self.0.x().coords().iter().copied().collect()
    }

    #[getter]
    fn f(&self) -> Vec<Complex64> {
        self.0.f().coords().iter().copied().collect()
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        from_matrix(&self.0.matrix())
    }

    fn __repr__(&self) -> String {
        format!("RankOne(dim={})", self.0.dim())
    }
}

/// A black-box map on rank-one idempotents.
#[pyclass(name = "Transform", frozen)]
struct PyTransform(TransformHandle);

#[pymethods]
impl PyTransform {
    /// `P ↦ A·h(P)·A⁻¹`.
    #[staticmethod]
    #[pyo3(signature = (op, field = "complex"))]
    fn induced(op: &PyOperator, field: &str) -> PyResult<Self> {
        core::induce(&op.0, self::field(field)?)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, field = "complex"))]
    fn identity(n: usize, field: &str) -> PyResult<Self> {
        Ok(Self(TransformHandle::identity(n, self::field(field)?)))
    }

    #[staticmethod]
    #[pyo3(signature = (n, field = "complex"))]
    fn transpose(n: usize, field: &str) -> PyResult<Self> {
        Ok(Self(TransformHandle::transpose(n, self::field(field)?)))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn field(&self) -> &'static str {
        field_name(self.0.field())
    }

    fn __call__(&self, p: &PyRankOne) -> PyResult<PyRankOne> {
        self.0.eval(&p.0).map(PyRankOne).map_err(err)
    }
}

/// `C^n` or `R^n` with `(x, y) = <ηx, y>` for an invertible `η`.
#[pyclass(name = "Space", frozen)]
struct PySpace(IndefiniteSpace);

#[pymethods]
impl PySpace {
    #[new]
    #[pyo3(signature = (eta, field = "complex"))]
    fn new(eta: Vec<Vec<Complex64>>, field: &str) -> PyResult<Self> {
        IndefiniteSpace::new(to_matrix(eta)?, self::field(field)?)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn eta(&self) -> Vec<Vec<Complex64>> {
        from_matrix(self.0.eta())
    }

    fn product(&self, x: Vec<Complex64>, y: Vec<Complex64>) -> PyResult<Complex64> {
        self.0
            .eta_product(&Vector::from_slice(&x), &Vector::from_slice(&y))
            .map_err(err)
    }
}

/// Returns `(operator, residual, probes)`.
#[pyfunction]
#[pyo3(signature = (phi, validation = 10, seed = 0))]
fn reconstruct(
    phi: &PyTransform,
    validation: usize,
    seed: u64,
) -> PyResult<(PyOperator, f64, usize)> {
    let r = core::reconstruct(&phi.0, validation, seed).map_err(err)?;
    Ok((PyOperator(r.operator), r.residual, r.probes_used))
}

/// Number of sampled pairs on which `PQ = 0` and `φ(P)φ(Q) = 0` disagree.
#[pyfunction]
#[pyo3(signature = (phi, samples = 500, seed = 0, tol = 1e-8))]
fn preservation_violations(
    phi: &PyTransform,
    samples: usize,
    seed: u64,
    tol: f64,
) -> PyResult<usize> {
    Ok(core::check_preservation(&phi.0, samples, seed, tol)
        .map_err(err)?
        .violations
        .len())
}

fn finite_rank(m: Vec<Vec<Complex64>>) -> PyResult<FiniteRankIdempotent> {
    FiniteRankIdempotent::new(to_matrix(m)?).map_err(err)
}

/// Rank-one pieces `(x, f)` of an idempotent matrix.
#[pyfunction]
fn decompose(p: Vec<Vec<Complex64>>) -> PyResult<Vec<PyRankOne>> {
    Ok(core::decompose(&finite_rank(p)?)
        .map_err(err)?
        .into_iter()
        .map(PyRankOne)
        .collect())
}

/// An idempotent above both arguments in the order `P ≤ Q ⟺ PQ = QP = P`.
#[pyfunction]
fn majorant(p1: Vec<Vec<Complex64>>, p2: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
    let m = core::majorant(&finite_rank(p1)?, &finite_rank(p2)?).map_err(err)?;
    Ok(from_matrix(m.matrix()))
}

/// Whether `P ≤ Q`.
#[pyfunction]
fn is_below(p: Vec<Vec<Complex64>>, q: Vec<Vec<Complex64>>) -> PyResult<bool> {
    Ok(core::relate(&finite_rank(p)?, &finite_rank(q)?, None)
        .map_err(err)?
        .p_leq_q)
}

/// `("linear" | "conjugate" | "none", constant or None)`.
#[pyfunction]
fn characterize(space: &PySpace, op: &PyOperator) -> PyResult<(&'static str, Option<Complex64>)> {
    let ch = core::characterize(&space.0, &op.0).map_err(err)?;
    let kind = match ch {
        Characterization::LinearSymmetry(_) => "linear",
        Characterization::ConjugateSymmetry(_) => "conjugate",
        Characterization::NotSymmetry => "none",
    };
    Ok((kind, ch.constant()))
}

/// Number of sampled ray pairs whose η-orthogonality the operator fails to preserve.
#[pyfunction]
#[pyo3(signature = (space, op, samples = 500, seed = 0, tol = 1e-8))]
fn symmetry_violations(
    space: &PySpace,
    op: &PyOperator,
    samples: usize,
    seed: u64,
    tol: f64,
) -> PyResult<usize> {
    let report =
        core::is_symmetry(&space.0, &RayMap::induced(&op.0), samples, seed, tol).map_err(err)?;
    Ok(report.violations.len())
}

/// `U` with `U*ηU = scale·η`.
#[pyfunction]
#[pyo3(signature = (space, seed = 0, scale = 1.0))]
fn generate_isometry(space: &PySpace, seed: u64, scale: f64) -> PyResult<PyOperator> {
    core::generate_eta_isometry(&space.0, seed, scale)
        .map(PyOperator)
        .map_err(err)
}

/// Recovers the operator from the ray map it induces, normalized.
#[pyfunction]
#[pyo3(signature = (space, op, validation = 10, seed = 0))]
fn recover(space: &PySpace, op: &PyOperator, validation: usize, seed: u64) -> PyResult<PyOperator> {
    let r = core::recover_inducing_operator(&space.0, &RayMap::induced(&op.0), validation, seed)
        .map_err(err)?;
    Ok(PyOperator(r.operator))
}

/// Runs the property suites; returns `(name, passed, checked, failures)` rows.
#[pyfunction]
#[pyo3(signature = (cases = 200, seed = 42))]
fn selftest(py: Python<'_>, cases: usize, seed: u64) -> Vec<(&'static str, bool, usize, usize)> {
    let cfg = SelftestConfig {
        cases,
        seed,
        ..SelftestConfig::default()
    };
    py.detach(|| run_all(&cfg))
        .into_iter()
        .map(|o| (o.name, o.passed(), o.checked, o.failures))
        .collect()
}

#[pymodule]
fn orthosym(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_class::<PyRankOne>()?;
    m.add_class::<PyTransform>()?;
    m.add_class::<PySpace>()?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(preservation_violations, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(majorant, m)?)?;
    m.add_function(wrap_pyfunction!(is_below, m)?)?;
    m.add_function(wrap_pyfunction!(characterize, m)?)?;
    m.add_function(wrap_pyfunction!(symmetry_violations, m)?)?;
    m.add_function(wrap_pyfunction!(generate_isometry, m)?)?;
    m.add_function(wrap_pyfunction!(recover, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
