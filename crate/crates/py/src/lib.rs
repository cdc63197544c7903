//! Python module `triwork`.
//!
//! States and directions are classes; every report comes back as a plain
//! dict with the same keys as the CLI's JSON output.

use pyo3::exceptions::{PyArithmeticError, PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde::Serialize;
use serde_json::Value;

use triwork as tw;

fn to_py_err(e: tw::Error) -> PyErr {
    use tw::Error as E;
    let msg = e.to_string();
    match e {
        E::Accuracy { .. } | E::Numerical(_) => PyArithmeticError::new_err(msg),
        E::Io(_) => PyIOError::new_err(msg),
        E::NoThreshold(_) | E::NonMonotone(_) | E::ZeroProbability(_) => PyRuntimeError::new_err(msg),
        _ => PyValueError::new_err(msg),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for tw::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

fn value_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    match v {
        Value::Null => Ok(py.None().into_bound(py)),
        Value::Bool(b) => b.into_bound_py_any(py),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_bound_py_any(py),
            (_, Some(u)) => u.into_bound_py_any(py),
            _ => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py),
        },
        Value::String(s) => s.into_bound_py_any(py),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(value_to_py(py, item)?)?;
            }
            Ok(list.into_any())
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, value_to_py(py, item)?)?;
            }
            Ok(dict.into_any())
        }
    }
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    value_to_py(py, &value)
}

/// A measurement direction on the Bloch sphere.
#[pyclass(name = "Direction", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyDirection(tw::Direction);

#[pymethods]
impl PyDirection {
    #[new]
    fn new(theta: f64, phi: f64) -> PyResult<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(PyValueError::new_err("angles must be finite"));
        }
        Ok(Self(tw::Direction::new(theta, phi)))
    }

    #[staticmethod]
    fn x() -> Self {
        Self(tw::Direction::x_axis())
    }

    #[staticmethod]
    fn y() -> Self {
        Self(tw::Direction::y_axis())
    }

    #[staticmethod]
    fn z() -> Self {
        Self(tw::Direction::z_axis())
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi()
    }

    fn vector(&self) -> [f64; 3] {
        self.0.vector()
    }

    fn __repr__(&self) -> String {
        format!("Direction(theta={}, phi={})", self.0.theta(), self.0.phi())
    }
}

/// A validated density matrix on one to three qubits.
#[pyclass(name = "DensityMatrix", frozen, from_py_object)]
#[derive(Clone)]
struct PyDensityMatrix(tw::DensityMatrix);

#[pymethods]
impl PyDensityMatrix {
    #[staticmethod]
    fn ghz() -> Self {
        Self(tw::dm_from_pure(&tw::ghz_state()))
    }

    #[staticmethod]
    fn w() -> Self {
        Self(tw::dm_from_pure(&tw::w_state()))
    }

    #[staticmethod]
    fn singlet() -> Self {
        Self(tw::dm_from_pure(&tw::singlet_state()))
    }

    /// Product of pure qubits pointing along the given directions.
    #[staticmethod]
    fn product(directions: Vec<PyDirection>) -> PyResult<Self> {
        let dirs: Vec<_> = directions.iter().map(|d| d.0).collect();
        Ok(Self(tw::dm_from_pure(&tw::product_state(&dirs).py_err()?)))
    }

    #[staticmethod]
    fn maximally_mixed(n_qubits: usize) -> PyResult<Self> {
        Ok(Self(tw::DensityMatrix::maximally_mixed(n_qubits).py_err()?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self(tw::DensityMatrix::from_json(text).py_err()?))
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self(tw::DensityMatrix::load(&path).py_err()?))
    }

    /// Convex combination of `(weight, state)` pairs.
    #[staticmethod]
    fn mix(components: Vec<(f64, PyDensityMatrix)>) -> PyResult<Self> {
        let parts: Vec<_> = components.iter().map(|(w, r)| (*w, &r.0)).collect();
        Ok(Self(tw::mix(&parts).py_err()?))
    }

    /// (1 − p)·|ψ⟩⟨ψ| + p·I/8 for family "GHZ" or "W".
    #[staticmethod]
    fn werner(family: &str, p: f64) -> PyResult<Self> {
        Ok(Self(tw::werner_state(parse_family(family)?, p).py_err()?))
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    fn purity(&self) -> f64 {
        self.0.purity()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues()
    }

    fn partial_trace(&self, keep: Vec<usize>) -> PyResult<Self> {
        Ok(Self(self.0.partial_trace(&keep).py_err()?))
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(n_qubits={}, purity={:.6})", self.0.n_qubits(), self.0.purity())
    }
}

fn parse_family(s: &str) -> PyResult<tw::WernerFamily> {
    match s.to_ascii_lowercase().as_str() {
        "ghz" | "ghz-werner" => Ok(tw::WernerFamily::Ghz),
        "w" | "w-werner" => Ok(tw::WernerFamily::W),
        _ => Err(PyValueError::new_err(format!("unknown family '{s}', expected GHZ or W"))),
    }
}

fn parse_criterion(s: &str) -> PyResult<tw::Criterion> {
    match s.to_ascii_lowercase().replace('_', "-").as_str() {
        "thermo3" => Ok(tw::Criterion::Thermo3),
        "thermo-sphere" => Ok(tw::Criterion::ThermoSphere),
        "mermin" => Ok(tw::Criterion::Mermin),
        _ => Err(PyValueError::new_err(format!(
            "unknown criterion '{s}', expected thermo3, thermo-sphere or mermin"
        ))),
    }
}

fn parse_mode(s: &str) -> PyResult<tw::Mode> {
    match s {
        "max" => Ok(tw::Mode::Max),
        "min" => Ok(tw::Mode::Min),
        _ => Err(PyValueError::new_err(format!("mode must be 'max' or 'min', got '{s}'"))),
    }
}

/// w_{z,u}: work Charlie extracts along u after Alice (z) and Bob (u) announce.
#[pyfunction]
fn work_zu(rho: &PyDensityMatrix, z: PyDirection, u: PyDirection) -> PyResult<f64> {
    tw::work_zu(&rho.0, &z.0, &u.0).py_err()
}

/// Three-axis work maximized over the frame angle.
#[pyfunction]
#[pyo3(name = "work_W")]
fn work_w<'py>(py: Python<'py>, rho: &PyDensityMatrix, z: PyDirection) -> PyResult<Bound<'py, PyAny>> {
    let r = tw::work_W(&rho.0, &z.0, &tw::OptimizerConfig::default()).py_err()?;
    to_dict(py, &r)
}

/// Three-axis work with the frame angle tied to the azimuth of z.
#[pyfunction]
fn coupled_frame_work(rho: &PyDensityMatrix, theta: f64, phi: f64) -> PyResult<f64> {
    tw::coupled_frame_work(&rho.0, theta, phi).py_err()
}

#[pyfunction]
fn xi_bipartite(rho: &PyDensityMatrix, theta_a: f64, theta_b: f64) -> PyResult<f64> {
    tw::xi_bipartite(&rho.0, theta_a, theta_b).py_err()
}

/// Work averaged over the best great circle.
#[pyfunction]
fn xi_capital<'py>(py: Python<'py>, rho: &PyDensityMatrix) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &tw::xi_capital(&rho.0, &tw::QuadratureConfig::default()).py_err()?)
}

/// Work averaged over the whole sphere.
#[pyfunction]
fn xi_capital_sphere<'py>(py: Python<'py>, rho: &PyDensityMatrix) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &tw::xi_capital_sphere(&rho.0, &tw::QuadratureConfig::default()).py_err()?)
}

/// Global extremum of the coupled-frame work over the measurement axis.
#[pyfunction]
#[pyo3(signature = (rho, mode = "max"))]
fn scan<'py>(py: Python<'py>, rho: &PyDensityMatrix, mode: &str) -> PyResult<Bound<'py, PyAny>> {
    let mode = parse_mode(mode)?;
    let ev = tw::TripartiteWork::new(&rho.0).py_err()?;
    let opt = py
        .detach(|| tw::optimize_sphere(|d| ev.coupled(d), mode, &tw::OptimizerConfig::default()))
        .py_err()?;
    to_dict(py, &opt)
}

#[pyfunction]
fn classify<'py>(py: Python<'py>, rho: &PyDensityMatrix) -> PyResult<Bound<'py, PyAny>> {
    let c = py
        .detach(|| tw::classify_state(&rho.0, &tw::OptimizerConfig::default()))
        .py_err()?;
    to_dict(py, &c)
}

/// ⟨B₃⟩ for twelve angles (θ, φ) in the order a1, a1′, a2, a2′, a3, a3′.
#[pyfunction]
fn mermin_expectation(rho: &PyDensityMatrix, angles: [f64; 12]) -> PyResult<f64> {
    tw::mermin_expectation(&rho.0, &tw::MerminSettings::from_angles(&angles)).py_err()
}

#[pyfunction]
fn max_mermin<'py>(py: Python<'py>, rho: &PyDensityMatrix) -> PyResult<Bound<'py, PyAny>> {
    let m = py
        .detach(|| tw::max_mermin(&rho.0, &tw::OptimizerConfig::mermin()))
        .py_err()?;
    to_dict(py, &m)
}

/// Mixing threshold p* of a Werner-type family.
#[pyfunction]
#[pyo3(signature = (family, criterion, tol = 5e-4))]
fn find_threshold<'py>(py: Python<'py>, family: &str, criterion: &str, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    let (f, c) = (parse_family(family)?, parse_criterion(criterion)?);
    let cfg = tw::ThresholdConfig {
        tol,
        ..tw::ThresholdConfig::default()
    };
    let r = py.detach(|| tw::find_threshold(f, c, &cfg)).py_err()?;
    to_dict(py, &r)
}

fn sim_config(shots: u64, seed: u64) -> tw::SimulationConfig {
    tw::SimulationConfig {
        shots,
        seed,
        ..tw::SimulationConfig::default()
    }
}

#[pyfunction]
#[pyo3(signature = (rho, z, u, shots = 100_000, seed = 0))]
fn simulate_tripartite<'py>(
    py: Python<'py>,
    rho: &PyDensityMatrix,
    z: PyDirection,
    u: PyDirection,
    shots: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = sim_config(shots, seed);
    let s = py.detach(|| tw::simulate_tripartite(&rho.0, &z.0, &u.0, &cfg)).py_err()?;
    to_dict(py, &s.estimate)
}

#[pyfunction]
#[pyo3(signature = (rho, a, b, shots = 100_000, seed = 0))]
fn simulate_bipartite<'py>(
    py: Python<'py>,
    rho: &PyDensityMatrix,
    a: PyDirection,
    b: PyDirection,
    shots: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = sim_config(shots, seed);
    let s = py.detach(|| tw::simulate_bipartite(&rho.0, &a.0, &b.0, &cfg)).py_err()?;
    to_dict(py, &s.estimate)
}

#[pymodule]
#[pyo3(name = "triwork")]
fn triwork_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDirection>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_function(wrap_pyfunction!(work_zu, m)?)?;
    m.add_function(wrap_pyfunction!(work_w, m)?)?;
    m.add_function(wrap_pyfunction!(coupled_frame_work, m)?)?;
    m.add_function(wrap_pyfunction!(xi_bipartite, m)?)?;
    m.add_function(wrap_pyfunction!(xi_capital, m)?)?;
    m.add_function(wrap_pyfunction!(xi_capital_sphere, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(mermin_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(max_mermin, m)?)?;
    m.add_function(wrap_pyfunction!(find_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_tripartite, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_bipartite, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
