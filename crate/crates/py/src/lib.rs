//! Python bindings. Complex arguments and results are Python `complex`.

use fockbench::coherent::{self, CoherentSpec, EvolutionSpec};
use fockbench::fock::quadrature_report;
use fockbench::pair::{self, PairCoherentSpec};
use fockbench::squeezing::{self, SqueezeSpec};
use fockbench::su11::{self, SU11Rep};
use fockbench::verify::{run_suite, Suite, SuiteParams};
use fockbench::{phase, FockState, TwoModeState, C64};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: fockbench::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Single-mode state over |0>..|dim-1>.
#[pyclass(name = "FockState", module = "fockbench", frozen)]
pub struct PyFockState {
    inner: FockState,
}

#[pymethods]
impl PyFockState {
    #[new]
    fn new(amplitudes: Vec<C64>) -> PyResult<Self> {
        let inner = FockState::new(amplitudes.into()).map_err(err)?;
        Ok(PyFockState { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<C64> {
        self.inner.amps().to_vec()
    }

    #[getter]
    fn tail_warning(&self) -> bool {
        self.inner.tail_warning
    }

    fn norm(&self) -> f64 {
        self.inner.norm_sqr().sqrt()
    }

    fn photon_distribution(&self) -> Vec<f64> {
        self.inner.photon_distribution()
    }

    /// (mean, variance) of the photon number.
    fn photon_statistics(&self) -> (f64, f64) {
        self.inner.photon_statistics()
    }

    fn fidelity(&self, other: &PyFockState) -> PyResult<f64> {
        self.inner.fidelity(&other.inner).map_err(err)
    }

    fn quadrature_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let q = quadrature_report(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("mean_x", q.mean_x)?;
        d.set_item("mean_p", q.mean_p)?;
        d.set_item("var_x", q.var_x)?;
        d.set_item("var_p", q.var_p)?;
        d.set_item("product", q.product)?;
        d.set_item("tail_warning", q.tail_warning)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("FockState(dim={}, tail_warning={})", self.inner.dim(), self.inner.tail_warning)
    }
}

/// Two-mode state, amplitudes indexed [n1][n2].
#[pyclass(name = "TwoModeState", module = "fockbench", frozen)]
pub struct PyTwoModeState {
    inner: TwoModeState,
}

#[pymethods]
impl PyTwoModeState {
    #[getter]
    fn dims(&self) -> (usize, usize) {
        (self.inner.dim_a(), self.inner.dim_b())
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Vec<C64>> {
        self.inner.amps().rows().into_iter().map(|r| r.to_vec()).collect()
    }

    #[getter]
    fn tail_warning(&self) -> bool {
        self.inner.tail_warning
    }

    fn joint_distribution(&self) -> Vec<Vec<f64>> {
        self.inner
            .joint_distribution()
            .rows()
            .into_iter()
            .map(|r| r.to_vec())
            .collect()
    }

    fn off_diagonal_mass(&self) -> f64 {
        self.inner.off_diagonal_mass()
    }

    fn fidelity(&self, other: &PyTwoModeState) -> PyResult<f64> {
        self.inner.fidelity(&other.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("TwoModeState(dims=({}, {}))", self.inner.dim_a(), self.inner.dim_b())
    }
}

fn single(s: fockbench::Result<FockState>) -> PyResult<PyFockState> {
    s.map(|inner| PyFockState { inner }).map_err(err)
}

fn two(s: fockbench::Result<TwoModeState>) -> PyResult<PyTwoModeState> {
    s.map(|inner| PyTwoModeState { inner }).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (alpha, dim = 64))]
fn coherent_state(alpha: C64, dim: usize) -> PyResult<PyFockState> {
    single(CoherentSpec::new(alpha, dim).and_then(|s| coherent::coherent_ladder(&s)))
}

/// Coherent state after time t of free evolution.
#[pyfunction]
#[pyo3(signature = (alpha, t, dim = 64))]
fn evolve_coherent(alpha: C64, t: f64, dim: usize) -> PyResult<PyFockState> {
    single(coherent::evolve_coherent(&EvolutionSpec { alpha0: alpha, t }, dim))
}

/// (phase, residual) for D(alpha + beta) against D(alpha)D(beta).
#[pyfunction]
#[pyo3(signature = (alpha, beta, dim = 64))]
fn displacement_compose(alpha: C64, beta: C64, dim: usize) -> PyResult<(C64, f64)> {
    let r = coherent::displacement_compose(alpha, beta, dim).map_err(err)?;
    Ok((r.phase, r.residual))
}

#[pyfunction]
#[pyo3(signature = (r, phi = 0.0, dim = 64))]
fn squeezed_vacuum(r: f64, phi: f64, dim: usize) -> PyResult<PyFockState> {
    single(SqueezeSpec::new(r, phi, dim).and_then(|s| squeezing::squeezed_vacuum_closed_form(&s)))
}

#[pyfunction]
#[pyo3(signature = (theta, dim = 64))]
fn theta_vacuum(theta: f64, dim: usize) -> PyResult<PyFockState> {
    single(squeezing::theta_vacuum(theta, dim))
}

#[pyfunction]
#[pyo3(signature = (k, xi, dim = 48))]
fn perelomov_state(k: f64, xi: C64, dim: usize) -> PyResult<PyFockState> {
    single(SU11Rep::new(k, dim).and_then(|rep| su11::perelomov_state(&rep, xi)))
}

#[pyfunction]
#[pyo3(signature = (r, phi = 0.0, m = 1, dim = 64))]
fn phase_squeezed(r: f64, phi: f64, m: usize, dim: usize) -> PyResult<PyFockState> {
    single(phase::phase_squeeze_closed_form(r, phi, m, dim))
}

#[pyfunction]
#[pyo3(signature = (s, dim = 48))]
fn two_mode_squeezed_vacuum(s: f64, dim: usize) -> PyResult<PyTwoModeState> {
    two(squeezing::two_mode_squeezed_vacuum(s, dim, dim))
}

#[pyfunction]
#[pyo3(signature = (zeta, q = 0, dim = 32))]
fn pair_coherent(zeta: C64, q: i64, dim: usize) -> PyResult<PyTwoModeState> {
    two(PairCoherentSpec::new(zeta, q, dim).and_then(|s| pair::pair_coherent(&s)))
}

/// Names accepted by `verify`.
#[pyfunction]
fn suites() -> Vec<&'static str> {
    Suite::ALL.iter().map(|s| s.name()).collect()
}

/// Runs a verification suite; returns {"suite", "pass", "checks"}.
#[pyfunction]
#[pyo3(signature = (suite, *, dim = None, alpha = None, r = None, phi = None, theta = None,
                    s = None, zeta = None, q = None, lam = None, z = None, tol = None))]
#[allow(clippy::too_many_arguments)]
fn verify<'py>(
    py: Python<'py>,
    suite: &str,
    dim: Option<usize>,
    alpha: Option<C64>,
    r: Option<f64>,
    phi: Option<f64>,
    theta: Option<f64>,
    s: Option<f64>,
    zeta: Option<C64>,
    q: Option<i64>,
    lam: Option<f64>,
    z: Option<C64>,
    tol: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let suite: Suite = suite.parse().map_err(err)?;
    let params = SuiteParams { dim, alpha, r, phi, theta, s, zeta, q, lambda: lam, z, tol };
    let report = py.detach(|| run_suite(suite, &params)).map_err(err)?;
    let checks = PyList::empty(py);
    for c in &report.checks {
        let d = PyDict::new(py);
        d.set_item("name", &c.name)?;
        d.set_item("measured", c.measured)?;
        d.set_item("bound", c.bound)?;
        d.set_item("pass", c.pass)?;
        checks.append(d)?;
    }
    let out = PyDict::new(py);
    out.set_item("suite", report.suite)?;
    out.set_item("pass", report.pass)?;
    out.set_item("checks", checks)?;
    Ok(out)
}

#[pymodule]
#[pyo3(name = "fockbench")]
fn fockbench_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFockState>()?;
    m.add_class::<PyTwoModeState>()?;
    m.add_function(wrap_pyfunction!(coherent_state, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_coherent, m)?)?;
    m.add_function(wrap_pyfunction!(displacement_compose, m)?)?;
    m.add_function(wrap_pyfunction!(squeezed_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(theta_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(perelomov_state, m)?)?;
    m.add_function(wrap_pyfunction!(phase_squeezed, m)?)?;
    m.add_function(wrap_pyfunction!(two_mode_squeezed_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(pair_coherent, m)?)?;
    m.add_function(wrap_pyfunction!(suites, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrappers_without_interpreter() {
        assert_eq!(suites().len(), Suite::ALL.len());
        let psi = coherent_state(C64::new(1.0, 0.5), 48).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        let (mean, _) = psi.photon_statistics();
        assert!((mean - 1.25).abs() < 1e-10);
        let (_, residual) = displacement_compose(C64::new(0.2, 0.0), C64::new(0.0, 0.3), 48).unwrap();
        assert!(residual < 1e-10);
        assert_eq!(pair_coherent(C64::new(1.0, 0.0), 2, 16).unwrap().dims(), (18, 16));
    }
}
