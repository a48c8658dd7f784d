//! Python bindings: matrices, radius estimates, scalar refinements, bound
//! evaluation and verification suites.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use radineq::bounds::{cartesian_check, evaluate, BoundConfig, BoundParams, TheoremId};
use radineq::harness::{compare_refinements, gen_matrix, lemma_suite, run_suite, EnsembleKind, EnsembleSpec, SuiteConfig};
use radineq::io::{write_gain_summary, write_report};
use radineq::linalg::{op_norm, ComplexMatrix, UnitVector};
use radineq::radius::{numerical_radius as radius_estimate, we_radius as we_estimate, wp_radius as wp_estimate};
use radineq::radius::{OperatorTuple, SphereOptConfig, DEFAULT_RESOLUTION};
use radineq::scalar::{refinement_s as scalar_s, young_refined_gap as scalar_gap, RefinementParams};
use radineq::RadError;

fn to_py(e: RadError) -> PyErr {
    match e {
        RadError::Io(msg) => PyIOError::new_err(msg),
        RadError::EigenFailure { .. } | RadError::Objective => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn rows_to_matrix(rows: Vec<Vec<Complex64>>) -> Result<ComplexMatrix, RadError> {
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(RadError::InvalidMatrix(format!("expected {dim} columns in every row")));
    }
    let entries: Vec<Complex64> = rows.into_iter().flatten().collect();
    ComplexMatrix::from_row_major(dim, &entries)
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.dim()).map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect()).collect()
}

fn vector(v: &UnitVector) -> Vec<Complex64> {
    v.as_slice().to_vec()
}

fn opt_config(seed: u64) -> SphereOptConfig {
    SphereOptConfig::default().with_seed(seed)
}

/// Square complex matrix.
#[pyclass(name = "Matrix", module = "pyradineq", frozen, from_py_object)]
#[derive(Clone)]
struct PyMatrix(ComplexMatrix);

#[pymethods]
impl PyMatrix {
    /// Builds a matrix from a list of rows of complex (or real) numbers.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        rows_to_matrix(rows).map(PyMatrix).map_err(to_py)
    }

    #[staticmethod]
    fn identity(dim: usize) -> Self {
        PyMatrix(ComplexMatrix::identity(dim))
    }

    /// Random matrix from a named ensemble, e.g. `"ginibre"` or `"psd"`.
    #[staticmethod]
    #[pyo3(signature = (kind, dim, seed=0, scale=1.0))]
    fn random(kind: &str, dim: usize, seed: u64, scale: f64) -> PyResult<Self> {
        let kind: EnsembleKind = kind.parse().map_err(to_py)?;
        gen_matrix(&EnsembleSpec::new(kind, dim, seed).with_scale(scale))
            .map(PyMatrix)
            .map_err(to_py)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn rows(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(&self.0)
    }

    fn adjoint(&self) -> Self {
        PyMatrix(self.0.adjoint())
    }

    fn __matmul__(&self, other: &PyMatrix) -> PyResult<Self> {
        if self.0.dim() != other.0.dim() {
            return Err(to_py(RadError::DimensionMismatch {
                expected: self.0.dim(),
                found: other.0.dim(),
            }));
        }
        Ok(PyMatrix(self.0.mul(&other.0)))
    }

    /// Operator norm.
    fn norm(&self) -> PyResult<f64> {
        op_norm(&self.0).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Matrix(dim={})", self.0.dim())
    }
}

/// Radius value with the unit vector that attains it.
#[pyclass(name = "RadiusEstimate", module = "pyradineq", frozen, get_all)]
struct PyRadiusEstimate {
    value: f64,
    witness: Vec<Complex64>,
    converged: bool,
    bound_side: String,
}

#[pymethods]
impl PyRadiusEstimate {
    fn __repr__(&self) -> String {
        format!("RadiusEstimate(value={}, bound_side='{}')", self.value, self.bound_side)
    }
}

impl From<radineq::radius::RadiusEstimate> for PyRadiusEstimate {
    fn from(e: radineq::radius::RadiusEstimate) -> Self {
        PyRadiusEstimate {
            value: e.value,
            witness: vector(&e.witness),
            converged: e.converged,
            bound_side: e.bound_side.label().to_string(),
        }
    }
}

fn tuple_of(ops: Vec<PyMatrix>) -> PyResult<OperatorTuple> {
    OperatorTuple::new(ops.into_iter().map(|m| m.0).collect()).map_err(to_py)
}

/// `w(T)` by phase-grid search.
#[pyfunction]
#[pyo3(signature = (t, resolution=DEFAULT_RESOLUTION))]
fn numerical_radius(t: &PyMatrix, resolution: usize) -> PyResult<PyRadiusEstimate> {
    radius_estimate(&t.0, resolution).map(Into::into).map_err(to_py)
}

/// `w_p(T_1, ..., T_n)` by multi-start sphere optimization.
#[pyfunction]
#[pyo3(signature = (ops, p, seed=0))]
fn wp_radius(ops: Vec<PyMatrix>, p: f64, seed: u64) -> PyResult<PyRadiusEstimate> {
    wp_estimate(&tuple_of(ops)?, p, &opt_config(seed)).map(Into::into).map_err(to_py)
}

/// Euclidean operator radius `w_e(T_1, ..., T_n)`.
#[pyfunction]
#[pyo3(signature = (ops, seed=0))]
fn we_radius(ops: Vec<PyMatrix>, seed: u64) -> PyResult<PyRadiusEstimate> {
    we_estimate(&tuple_of(ops)?, &opt_config(seed)).map(Into::into).map_err(to_py)
}

/// Multi-level refinement term `S_N(nu)` at positive scalars.
#[pyfunction]
fn refinement_s(a: f64, b: f64, nu: f64, levels: u32) -> PyResult<f64> {
    let params = RefinementParams::new(nu, levels).map_err(to_py)?;
    scalar_s(a, b, &params).map_err(to_py)
}

/// `nu a + (1 - nu) b - S_N(nu) - a^nu b^(1 - nu)`.
#[pyfunction]
fn young_refined_gap(a: f64, b: f64, nu: f64, levels: u32) -> PyResult<f64> {
    let params = RefinementParams::new(nu, levels).map_err(to_py)?;
    scalar_gap(a, b, &params).map_err(to_py)
}

/// Outcome of one bound evaluation.
#[pyclass(name = "BoundReport", module = "pyradineq", frozen)]
struct PyBoundReport(radineq::bounds::BoundReport);

#[pymethods]
impl PyBoundReport {
    #[getter]
    fn theorem(&self) -> &'static str {
        self.0.theorem.as_str()
    }
    #[getter]
    fn status(&self) -> &'static str {
        self.0.status.as_str()
    }
    #[getter]
    fn lhs_lower(&self) -> f64 {
        self.0.lhs_lower
    }
    #[getter]
    fn norm_term(&self) -> f64 {
        self.0.norm_term
    }
    #[getter]
    fn refinement_upper(&self) -> f64 {
        self.0.refinement_upper
    }
    #[getter]
    fn rhs_refined_est(&self) -> f64 {
        self.0.rhs_refined_est
    }
    #[getter]
    fn rhs_baseline(&self) -> f64 {
        self.0.rhs_baseline
    }
    #[getter]
    fn refinement_gain(&self) -> f64 {
        self.0.refinement_gain
    }
    #[getter]
    fn pointwise_violations(&self) -> usize {
        self.0.pointwise_violations
    }
    #[getter]
    fn dominance_violations(&self) -> usize {
        self.0.dominance_violations
    }
    #[getter]
    fn variants(&self) -> BTreeMap<String, f64> {
        self.0.variants.clone()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundReport(theorem='{}', status='{}', lhs_lower={}, rhs_refined_est={})",
            self.0.theorem, self.0.status.as_str(), self.0.lhs_lower, self.0.rhs_refined_est
        )
    }
}

/// Evaluates a bound by id (e.g. `"thm2.3"`) on a flat operand list.
#[pyfunction]
#[pyo3(signature = (theorem, operands, nu=0.5, p=2.0, q=None, r=2.0, levels=1, seed=0, samples=256))]
#[allow(clippy::too_many_arguments)]
fn bound(
    theorem: &str,
    operands: Vec<PyMatrix>,
    nu: f64,
    p: f64,
    q: Option<f64>,
    r: f64,
    levels: u32,
    seed: u64,
    samples: usize,
) -> PyResult<PyBoundReport> {
    let theorem: TheoremId = theorem.parse().map_err(to_py)?;
    let mut params = BoundParams::default().with_nu(nu).with_p(p).with_r(r).with_levels(levels);
    if let Some(q) = q {
        params = params.with_q(q);
    }
    let cfg = BoundConfig {
        samples,
        ..BoundConfig::default().with_seed(seed)
    };
    let mats: Vec<ComplexMatrix> = operands.into_iter().map(|m| m.0).collect();
    evaluate(theorem, &mats, &params, &cfg).map(PyBoundReport).map_err(to_py)
}

/// `(w(A)^2, half norm of A*A + AA*, identity deviation)` for `A = B + iC`.
#[pyfunction]
fn cartesian(a: &PyMatrix) -> PyResult<(f64, f64, f64)> {
    let c = cartesian_check(&a.0).map_err(to_py)?;
    Ok((c.w_squared, c.half_norm, c.identity_deviation))
}

/// Summary and tables of a verification run.
#[pyclass(name = "SuiteReport", module = "pyradineq", frozen)]
struct PySuiteReport(radineq::harness::SuiteReport);

#[pymethods]
impl PySuiteReport {
    #[getter]
    fn trials(&self) -> usize {
        self.0.records.len()
    }
    #[getter]
    fn pointwise_violations(&self) -> usize {
        self.0.pointwise_violations()
    }
    #[getter]
    fn certified_violations(&self) -> usize {
        self.0.certified_violations()
    }
    #[getter]
    fn dominance_violations(&self) -> usize {
        self.0.dominance_violations()
    }
    #[getter]
    fn errors(&self) -> usize {
        self.0.errors()
    }
    #[getter]
    fn evidence(&self) -> BTreeMap<String, f64> {
        self.0.evidence.clone()
    }

    fn is_clean(&self) -> bool {
        self.0.is_clean()
    }

    /// Trial table as CSV text.
    fn report_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        write_report(&self.0.records, &mut buf).map_err(to_py)?;
        String::from_utf8(buf).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Per-theorem gain summary as CSV text.
    fn gains_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        write_gain_summary(&self.0.aggregates, &mut buf).map_err(to_py)?;
        String::from_utf8(buf).map_err(|e| PyValueError::new_err(e.to_string()))
    }
}

fn suite_config(theorems: Option<Vec<String>>, trials: usize, dims: (usize, usize), seed: u64, samples: usize) -> PyResult<SuiteConfig> {
    let mut cfg = SuiteConfig {
        trials,
        dims,
        seed,
        samples,
        ..SuiteConfig::default()
    };
    if let Some(ids) = theorems {
        cfg.theorems = ids.iter().map(|s| s.parse()).collect::<Result<_, _>>().map_err(to_py)?;
    }
    Ok(cfg)
}

/// Runs the bound suite (`kind="bounds"`), the lemma suite (`"lemmas"`) or
/// the baseline comparison (`"compare"`).
#[pyfunction]
#[pyo3(signature = (kind="bounds", theorems=None, trials=50, dims=(2, 6), seed=0, samples=256))]
fn verify(
    py: Python<'_>,
    kind: &str,
    theorems: Option<Vec<String>>,
    trials: usize,
    dims: (usize, usize),
    seed: u64,
    samples: usize,
) -> PyResult<PySuiteReport> {
    let cfg = suite_config(theorems, trials, dims, seed, samples)?;
    let run = match kind {
        "bounds" => run_suite,
        "lemmas" => lemma_suite,
        "compare" => compare_refinements,
        other => return Err(PyValueError::new_err(format!("unknown suite kind '{other}'"))),
    };
    py.detach(|| run(&cfg)).map(PySuiteReport).map_err(to_py)
}

#[pymodule]
fn pyradineq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyRadiusEstimate>()?;
    m.add_class::<PyBoundReport>()?;
    m.add_class::<PySuiteReport>()?;
    m.add_function(wrap_pyfunction!(numerical_radius, m)?)?;
    m.add_function(wrap_pyfunction!(wp_radius, m)?)?;
    m.add_function(wrap_pyfunction!(we_radius, m)?)?;
    m.add_function(wrap_pyfunction!(refinement_s, m)?)?;
    m.add_function(wrap_pyfunction!(young_refined_gap, m)?)?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(cartesian, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("THEOREMS", TheoremId::ALL.iter().map(|t| t.as_str()).collect::<Vec<_>>())?;
    m.add("ENSEMBLES", EnsembleKind::ALL.iter().map(|k| k.as_str()).collect::<Vec<_>>())?;
    Ok(())
}
