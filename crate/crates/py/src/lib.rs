//! Python bindings: model parameters, frame and curvature data, the
//! verification report, geodesic integration and Killing-field checks.
//!
//! Points are sequences `(r, s, t, w, x, y, z)`; matrices come back as
//! nested lists, reports as JSON strings.

use ebcv::geodesic::{self, circle_check, CotangentState, GeodesicMode, CSV_HEADER, STATE_DIM};
use ebcv::homogeneous::{classify_structure, Torsion3};
use ebcv::killing::{killing_basis_m0, killing_residual, max_abs_matrix, PolyVectorField};
use ebcv::manifold::{self, bcv_classify, Case2Predicate, Matrix7};
use ebcv::sampling::sample_points;
use ebcv::tensor::{Tensor3, DIM};
use ebcv::verify::{run_verify, VerifyConfig};
use ebcv::{CoordPoint, Error};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(pyebcv, EbcvError, PyException);
create_exception!(pyebcv, DomainError, EbcvError);
create_exception!(pyebcv, DomainExit, EbcvError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::DomainViolation { .. } | Error::ModeMismatch { .. } => DomainError::new_err(e.to_string()),
        Error::DomainExit { .. } => DomainExit::new_err(e.to_string()),
        Error::InvalidArgument(_) | Error::InvalidIndex(_) | Error::MalformedPolynomial(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => EbcvError::new_err(e.to_string()),
    }
}

fn point(q: Vec<f64>) -> PyResult<CoordPoint> {
    let c: [f64; DIM] = q.try_into().map_err(|v: Vec<f64>| PyValueError::new_err(format!("a point has 7 coordinates, got {}", v.len())))?;
    Ok(CoordPoint::from_array(c))
}

fn rows(m: &Matrix7) -> Vec<Vec<f64>> {
    (0..DIM).map(|i| (0..DIM).map(|j| m[(i, j)]).collect()).collect()
}

fn nested(t: &Tensor3<f64>) -> Vec<Vec<Vec<f64>>> {
    (0..DIM).map(|a| (0..DIM).map(|b| (0..DIM).map(|c| t[[a, b, c]]).collect()).collect()).collect()
}

/// Parameters `(m, l)` of the metric family.
#[pyclass(frozen, module = "pyebcv")]
struct ModelParams {
    inner: ebcv::ModelParams,
}

#[pymethods]
impl ModelParams {
    #[new]
    fn new(m: f64, l: f64) -> PyResult<Self> {
        if !(m.is_finite() && l.is_finite()) {
            return Err(PyValueError::new_err("m and l must be finite"));
        }
        Ok(ModelParams { inner: ebcv::ModelParams::new(m, l) })
    }

    #[staticmethod]
    fn heisenberg() -> Self {
        ModelParams { inner: ebcv::ModelParams::HEISENBERG }
    }

    #[getter]
    fn m(&self) -> f64 {
        self.inner.m
    }

    #[getter]
    fn l(&self) -> f64 {
        self.inner.l
    }

    fn k_factor(&self, q: Vec<f64>) -> PyResult<f64> {
        manifold::k_factor(&point(q)?, &self.inner).map_err(to_py)
    }

    /// Column `a` holds the coordinates of `X_{a+1}`.
    fn frame(&self, q: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        Ok(rows(&manifold::frame_matrix(&point(q)?, &self.inner).map_err(to_py)?))
    }

    fn metric(&self, q: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        Ok(rows(&manifold::metric_matrix(&point(q)?, &self.inner).map_err(to_py)?))
    }

    /// Frame coefficients of `[X_a, X_b]`, 1-based labels.
    fn bracket(&self, a: usize, b: usize, q: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(manifold::bracket_frame(a, b, &point(q)?, &self.inner).map_err(to_py)?.0.to_vec())
    }

    /// `connection[a][b][c] = <nabla_{X_a} X_b, X_c>`.
    fn connection(&self, q: Vec<f64>) -> PyResult<Vec<Vec<Vec<f64>>>> {
        Ok(nested(&manifold::connection_table(&point(q)?, &self.inner).map_err(to_py)?))
    }

    /// `R(X_a, X_b, X_c, X_d)`, 1-based labels.
    fn riemann(&self, a: usize, b: usize, c: usize, d: usize, q: Vec<f64>) -> PyResult<f64> {
        if [a, b, c, d].iter().any(|i| !(1..=DIM).contains(i)) {
            return Err(PyValueError::new_err("frame labels run from 1 to 7"));
        }
        Ok(manifold::riemann_frame(&point(q)?, &self.inner).map_err(to_py)?.component(a, b, c, d))
    }

    fn ricci(&self, q: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        Ok(rows(&manifold::ricci_frame(&point(q)?, &self.inner).map_err(to_py)?))
    }

    fn scalar_curvature(&self, q: Vec<f64>) -> PyResult<f64> {
        manifold::scalar_curvature(&point(q)?, &self.inner).map_err(to_py)
    }

    /// `torsion[a][b][c] = <T^D(X_a, X_b), X_c>` of the characteristic connection.
    fn torsion(&self, q: Vec<f64>) -> PyResult<Vec<Vec<Vec<f64>>>> {
        Ok(nested(&Torsion3::at(&point(q)?, &self.inner).map_err(to_py)?.0))
    }

    /// Tricerri-Vanhecke class of the torsion over `samples` seeded points.
    #[pyo3(signature = (samples=50, seed=7))]
    fn structure_class(&self, samples: usize, seed: u64) -> PyResult<String> {
        let pts = sample_points(&self.inner, samples, seed).map_err(to_py)?;
        Ok(classify_structure(&self.inner, &pts).map_err(to_py)?.class.name().to_string())
    }

    /// Seeded sample points in the chart.
    #[pyo3(signature = (n, seed=7))]
    fn sample_points(&self, n: usize, seed: u64) -> PyResult<Vec<Vec<f64>>> {
        Ok(sample_points(&self.inner, n, seed).map_err(to_py)?.iter().map(|q| q.to_array().to_vec()).collect())
    }

    fn __repr__(&self) -> String {
        format!("ModelParams(m={}, l={})", self.inner.m, self.inner.l)
    }
}

/// An RK4 trajectory of the normal geodesic flow.
#[pyclass(frozen, module = "pyebcv")]
struct Trajectory {
    inner: geodesic::Trajectory,
}

#[pymethods]
impl Trajectory {
    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode.name()
    }

    #[getter]
    fn step(&self) -> f64 {
        self.inner.step
    }

    #[staticmethod]
    fn columns() -> Vec<&'static str> {
        CSV_HEADER.to_vec()
    }

    /// One row per sample: `u`, the 14 state components and `H`.
    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner.rows().map(|r| r.to_vec()).collect()
    }

    fn energy_drift(&self) -> f64 {
        self.inner.energy_drift()
    }

    /// `"circle, radius ..."`, `"line"` or `"neither (...)"`.
    fn circle_verdict(&self) -> PyResult<String> {
        Ok(circle_check(&self.inner).map_err(to_py)?.to_string())
    }

    fn __len__(&self) -> usize {
        self.inner.samples.len()
    }
}

fn parse_mode(mode: &str) -> PyResult<GeodesicMode> {
    mode.parse().map_err(|e: Error| PyValueError::new_err(e.to_string()))
}

/// Integrate the normal geodesic flow from `state = (q, p)` (14 values).
#[pyfunction]
#[pyo3(signature = (params, state, h=1e-3, n=1000, mode="heisenberg"))]
fn integrate(params: &ModelParams, state: Vec<f64>, h: f64, n: usize, mode: &str) -> PyResult<Trajectory> {
    let s: [f64; STATE_DIM] =
        state.try_into().map_err(|_| PyValueError::new_err(format!("a cotangent state has {STATE_DIM} values")))?;
    let inner = geodesic::integrate(&CotangentState::from_array(s), &params.inner, parse_mode(mode)?, h, n).map_err(to_py)?;
    Ok(Trajectory { inner })
}

#[pyfunction]
#[pyo3(signature = (params, state, mode="heisenberg"))]
fn hamiltonian(params: &ModelParams, state: Vec<f64>, mode: &str) -> PyResult<f64> {
    let s: [f64; STATE_DIM] =
        state.try_into().map_err(|_| PyValueError::new_err(format!("a cotangent state has {STATE_DIM} values")))?;
    geodesic::hamiltonian(&CotangentState::from_array(s), &params.inner, parse_mode(mode)?).map_err(to_py)
}

/// The full verification report as JSON (elapsed time zeroed unless asked for).
#[pyfunction]
#[pyo3(signature = (params, samples=100, seed=7, keep_elapsed=false))]
fn verify(params: &ModelParams, samples: usize, seed: u64, keep_elapsed: bool) -> PyResult<String> {
    let mut report = run_verify(&VerifyConfig::new(params.inner, samples, seed)).map_err(to_py)?;
    if !keep_elapsed {
        report.summary.elapsed_seconds = 0.0;
    }
    serde_json::to_string(&report).map_err(|e| EbcvError::new_err(e.to_string()))
}

/// The 13 Killing fields of the `m = 0` family as a JSON list.
#[pyfunction]
fn killing_basis(l: f64) -> PyResult<String> {
    serde_json::to_string(&killing_basis_m0(l)).map_err(|e| EbcvError::new_err(e.to_string()))
}

/// Largest Killing residual of a JSON field over the given points.
#[pyfunction]
fn killing_residual_max(params: &ModelParams, field_json: &str, points: Vec<Vec<f64>>) -> PyResult<f64> {
    let field: PolyVectorField = serde_json::from_str(field_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let mut worst: f64 = 0.0;
    for q in points {
        worst = worst.max(max_abs_matrix(&killing_residual(&field, &point(q)?, &params.inner).map_err(to_py)?));
    }
    Ok(worst)
}

/// BCV case of `(m, l)` as `(name, case number)`.
#[pyfunction]
#[pyo3(signature = (m, l, squared=false))]
fn classify(m: f64, l: f64, squared: bool) -> (&'static str, u8) {
    let pred = if squared { Case2Predicate::Squared } else { Case2Predicate::Printed };
    let c = bcv_classify(m, l, pred);
    (c.class.name(), c.case)
}

#[pymodule]
fn pyebcv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ModelParams>()?;
    m.add_class::<Trajectory>()?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(killing_basis, m)?)?;
    m.add_function(wrap_pyfunction!(killing_residual_max, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add("EbcvError", m.py().get_type::<EbcvError>())?;
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add("DomainExit", m.py().get_type::<DomainExit>())?;
    Ok(())
}
